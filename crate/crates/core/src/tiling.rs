//! Polyomino tiling of grid regions: greedy tilers for the O and S/Z
//! tetrominoes, an exact-cover oracle for any tile set, and a port verifier
//! for tiling gadgets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::relation::Relation;

pub type Cell = (usize, usize);

/// Default limit on region size for the exact-cover search.
pub const EXACT_COVER_CAP: usize = 64;

/// A finite set of filled cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Region {
    pub cells: BTreeSet<Cell>,
}

impl Region {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Region {
        Region { cells: cells.into_iter().collect() }
    }

    pub fn rect(rows: usize, cols: usize) -> Region {
        Region::new((0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))))
    }

    /// Lines of `#` (filled) and `.` (empty).
    pub fn parse(text: &str) -> Result<Region> {
        let mut cells = BTreeSet::new();
        for (r, line) in text.lines().enumerate() {
            for (c, ch) in line.trim_end().chars().enumerate() {
                match ch {
                    '#' => {
                        cells.insert((r, c));
                    }
                    '.' | ' ' => {}
                    _ => return Err(parse_err(r + 1, format!("unexpected {ch:?} in region"))),
                }
            }
        }
        Ok(Region { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains(&cell)
    }

    fn bounds(&self) -> (usize, usize) {
        let rows = self.cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
        let cols = self.cells.iter().map(|c| c.1 + 1).max().unwrap_or(0);
        (rows, cols)
    }

    /// Mirror left to right within the bounding box.
    fn mirrored(&self) -> Region {
        let (_, cols) = self.bounds();
        Region::new(self.cells.iter().map(|&(r, c)| (r, cols - 1 - c)))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (rows, cols) = self.bounds();
        for r in 0..rows {
            let line: String = (0..cols).map(|c| if self.contains((r, c)) { '#' } else { '.' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Cells relative to the shape's top-left, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape(pub Vec<(i64, i64)>);

impl Shape {
    pub fn new(cells: impl IntoIterator<Item = (i64, i64)>) -> Result<Shape> {
        let cells: BTreeSet<(i64, i64)> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(Error::Invalid("empty tile".into()));
        }
        // Connected under 4-adjacency.
        let start = *cells.iter().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some((r, c)) = stack.pop() {
            for n in [(r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)] {
                if cells.contains(&n) && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        if seen.len() != cells.len() {
            return Err(Error::Invalid("tile is not connected".into()));
        }
        Ok(Shape::normalised(cells))
    }

    fn normalised(cells: impl IntoIterator<Item = (i64, i64)>) -> Shape {
        let v: Vec<(i64, i64)> = cells.into_iter().collect();
        let r0 = v.iter().map(|c| c.0).min().unwrap_or(0);
        let c0 = v.iter().map(|c| c.1).min().unwrap_or(0);
        let mut out: Vec<(i64, i64)> = v.iter().map(|&(r, c)| (r - r0, c - c0)).collect();
        out.sort();
        Shape(out)
    }

    /// From a picture with rows separated by `/`, e.g. `"##/#."`.
    pub fn from_picture(pic: &str) -> Result<Shape> {
        let mut cells = Vec::new();
        for (r, row) in pic.split('/').enumerate() {
            for (c, ch) in row.chars().enumerate() {
                match ch {
                    '#' => cells.push((r as i64, c as i64)),
                    '.' => {}
                    _ => return Err(Error::Invalid(format!("unexpected {ch:?} in tile picture"))),
                }
            }
        }
        Shape::new(cells)
    }

    pub fn named(name: &str) -> Option<Shape> {
        let pic = match name {
            "I" => "####",
            "O" => "##/##",
            "T" => "###/.#.",
            "S" => ".##/##.",
            "Z" => "##./.##",
            "J" => ".#/.#/##",
            "L" => "#./#./##",
            "tromino-I" => "###",
            "tromino-L" => "#./##",
            _ => return None,
        };
        Some(Shape::from_picture(pic).expect("built-in tile"))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Quarter turn clockwise.
    pub fn rotated(&self) -> Shape {
        Shape::normalised(self.0.iter().map(|&(r, c)| (c, -r)))
    }

    /// Distinct rotations; reflections are not included.
    pub fn rotations(&self) -> Vec<Shape> {
        let mut out: Vec<Shape> = Vec::new();
        let mut s = self.clone();
        for _ in 0..4 {
            if !out.contains(&s) {
                out.push(s.clone());
            }
            s = s.rotated();
        }
        out
    }
}

/// Tiles available for a tiling. Rotations are free, reflections are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSet {
    pub shapes: Vec<Shape>,
}

impl TileSet {
    pub fn new(shapes: Vec<Shape>) -> TileSet {
        TileSet { shapes }
    }

    /// Comma-separated tile names or `/`-separated pictures, e.g.
    /// `"S,Z"` or `"O,##/#."`.
    pub fn parse(spec: &str) -> Result<TileSet> {
        let shapes = spec
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| match Shape::named(t) {
                Some(s) => Ok(s),
                None if t.contains('#') => Shape::from_picture(t),
                None => Err(Error::Invalid(format!("unknown tile {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if shapes.is_empty() {
            return Err(Error::Invalid("empty tile set".into()));
        }
        Ok(TileSet { shapes })
    }

    /// Distinct oriented shapes.
    pub fn oriented(&self) -> Vec<Shape> {
        let set: BTreeSet<Shape> = self.shapes.iter().flat_map(|s| s.rotations()).collect();
        set.into_iter().collect()
    }

    /// Whether every tile is `shape` up to rotation.
    pub fn only(&self, shape: &Shape) -> bool {
        let rots = shape.rotations();
        self.shapes.iter().all(|s| rots.contains(s))
    }
}

/// Placed tiles, each a sorted list of cells.
pub type Tiling = Vec<Vec<Cell>>;

/// Whether `t` covers every filled cell exactly once with tiles from `tiles`.
pub fn check_tiling(r: &Region, tiles: &TileSet, t: &Tiling) -> bool {
    let oriented = tiles.oriented();
    let mut seen = BTreeSet::new();
    for piece in t {
        let shape = Shape::normalised(piece.iter().map(|&(a, b)| (a as i64, b as i64)));
        if !oriented.contains(&shape) {
            return false;
        }
        for &c in piece {
            if !r.contains(c) || !seen.insert(c) {
                return false;
            }
        }
    }
    seen.len() == r.len()
}

/// First uncovered cell in row-major order.
fn first_free(r: &Region, covered: &BTreeSet<Cell>) -> Option<Cell> {
    r.cells.iter().copied().find(|c| !covered.contains(c))
}

fn place(r: &Region, covered: &mut BTreeSet<Cell>, cells: &[(isize, isize)], at: Cell, t: &mut Tiling) -> bool {
    let mut piece = Vec::new();
    for &(dr, dc) in cells {
        let (Some(a), Some(b)) = (at.0.checked_add_signed(dr), at.1.checked_add_signed(dc)) else {
            return false;
        };
        if !r.contains((a, b)) || covered.contains(&(a, b)) {
            return false;
        }
        piece.push((a, b));
    }
    covered.extend(piece.iter().copied());
    piece.sort();
    t.push(piece);
    true
}

/// O tetrominoes: the first uncovered cell can only be the top-left corner
/// of a square.
pub fn tile_o_greedy(r: &Region) -> Option<Tiling> {
    let mut covered = BTreeSet::new();
    let mut t = Vec::new();
    while let Some(c) = first_free(r, &covered) {
        if !place(r, &mut covered, &[(0, 0), (0, 1), (1, 0), (1, 1)], c, &mut t) {
            return None;
        }
    }
    Some(t)
}

/// The greedy tiler for an O-only, S-only or Z-only tile set.
pub fn tile_greedy(r: &Region, tiles: &TileSet) -> Result<Option<Tiling>> {
    let named = |n| Shape::named(n).unwrap();
    if tiles.only(&named("O")) {
        Ok(tile_o_greedy(r))
    } else if tiles.only(&named("S")) {
        Ok(tile_s_greedy(r, false))
    } else if tiles.only(&named("Z")) {
        Ok(tile_s_greedy(r, true))
    } else {
        Err(Error::Precondition("greedy tiling needs a tile set of only O, only S or only Z".into()))
    }
}

/// S tetrominoes (Z when `mirror`). The first uncovered cell is the top
/// left of either a horizontal or vertical S; if its right neighbour is
/// free, the vertical one would strand that neighbour.
pub fn tile_s_greedy(r: &Region, mirror: bool) -> Option<Tiling> {
    if mirror {
        let (_, cols) = r.bounds();
        let t = tile_s_greedy(&r.mirrored(), false)?;
        return Some(
            t.into_iter()
                .map(|p| {
                    let mut p: Vec<Cell> = p.into_iter().map(|(a, b)| (a, cols - 1 - b)).collect();
                    p.sort();
                    p
                })
                .collect(),
        );
    }
    let mut covered = BTreeSet::new();
    let mut t = Vec::new();
    while let Some(c) = first_free(r, &covered) {
        let right = (c.0, c.1 + 1);
        let cells: &[(isize, isize)] = if r.contains(right) && !covered.contains(&right) {
            &[(0, 0), (0, 1), (1, -1), (1, 0)]
        } else {
            &[(0, 0), (1, 0), (1, 1), (2, 1)]
        };
        if !place(r, &mut covered, cells, c, &mut t) {
            return None;
        }
    }
    Some(t)
}

/// Exact-cover search state over a region's cells.
struct Cover {
    /// Placements whose lowest cell is the given cell, in lexicographic order.
    starting_at: Vec<Vec<Vec<usize>>>,
    covered: Vec<bool>,
    chosen: Vec<Vec<usize>>,
}

impl Cover {
    fn new(r: &Region, tiles: &TileSet) -> Cover {
        let cells: Vec<Cell> = r.cells.iter().copied().collect();
        let index = |c: (i64, i64)| -> Option<usize> {
            if c.0 < 0 || c.1 < 0 {
                return None;
            }
            cells.binary_search(&(c.0 as usize, c.1 as usize)).ok()
        };
        let mut starting_at: Vec<Vec<Vec<usize>>> = vec![Vec::new(); cells.len()];
        for shape in tiles.oriented() {
            // Anchor the shape's first cell (row-major) on each region cell.
            let (ar, ac) = shape.0[0];
            for &(r0, c0) in &cells {
                let ids: Option<Vec<usize>> =
                    shape.0.iter().map(|&(dr, dc)| index((r0 as i64 + dr - ar, c0 as i64 + dc - ac))).collect();
                if let Some(mut ids) = ids {
                    ids.sort();
                    starting_at[ids[0]].push(ids);
                }
            }
        }
        for list in &mut starting_at {
            list.sort();
            list.dedup();
        }
        Cover { starting_at, covered: vec![false; cells.len()], chosen: Vec::new() }
    }

    /// Visit solutions; `visit` returns `false` to stop.
    fn search(&mut self, from: usize, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
        let Some(i) = (from..self.covered.len()).find(|&i| !self.covered[i]) else {
            return visit(&self.chosen);
        };
        for k in 0..self.starting_at[i].len() {
            let p = self.starting_at[i][k].clone();
            if p.iter().any(|&x| self.covered[x]) {
                continue;
            }
            for &x in &p {
                self.covered[x] = true;
            }
            self.chosen.push(p);
            let go_on = self.search(i + 1, visit);
            let p = self.chosen.pop().unwrap();
            for &x in &p {
                self.covered[x] = false;
            }
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn check_cap(r: &Region, cap: usize) -> Result<()> {
    if r.len() > cap {
        return Err(Error::CapExceeded { size: r.len(), cap });
    }
    Ok(())
}

/// Exact cover: first uncovered cell in row-major order, placements tried in
/// lexicographic order of their cells.
pub fn tile_exact_cover(r: &Region, tiles: &TileSet, cap: usize) -> Result<Option<Tiling>> {
    check_cap(r, cap)?;
    let cells: Vec<Cell> = r.cells.iter().copied().collect();
    let mut cover = Cover::new(r, tiles);
    let mut found = None;
    cover.search(0, &mut |sol| {
        found = Some(sol.iter().map(|p| p.iter().map(|&i| cells[i]).collect()).collect());
        false
    });
    if let Some(t) = &found {
        if !check_tiling(r, tiles, t) {
            return Err(Error::Internal("exact cover produced an invalid tiling".into()));
        }
    }
    Ok(found)
}

pub fn count_tilings(r: &Region, tiles: &TileSet, cap: usize) -> Result<u64> {
    check_cap(r, cap)?;
    let mut cover = Cover::new(r, tiles);
    let mut n = 0u64;
    cover.search(0, &mut |_| {
        n += 1;
        true
    });
    Ok(n)
}

/// A region with distinguished port cell groups. A port is either covered
/// by the gadget's own tiles or claimed whole by an external piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortGadget {
    pub region: Region,
    pub ports: Vec<Vec<Cell>>,
    pub tiles: TileSet,
}

impl PortGadget {
    pub fn new(region: Region, ports: Vec<Vec<Cell>>, tiles: TileSet) -> Result<PortGadget> {
        let mut seen = BTreeSet::new();
        for group in &ports {
            if group.is_empty() {
                return Err(Error::Invalid("empty port".into()));
            }
            for &c in group {
                if !region.contains(c) || !seen.insert(c) {
                    return Err(Error::Invalid(format!("port cell {c:?} is outside the region or repeated")));
                }
            }
        }
        Ok(PortGadget { region, ports, tiles })
    }

    /// A `tiles <spec>` line, then a picture: `#` is a plain cell, `.` is
    /// empty and the letters `a`, `b`, ... mark the cells of port 0, 1, ...
    pub fn parse(text: &str) -> Result<PortGadget> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (n, first) = lines.next().ok_or_else(|| parse_err(1, "empty gadget file"))?;
        let spec = first
            .trim()
            .strip_prefix("tiles ")
            .ok_or_else(|| parse_err(n + 1, "expected `tiles <spec>`"))?;
        let tiles = TileSet::parse(spec).map_err(|e| parse_err(n + 1, e.to_string()))?;
        let mut cells = BTreeSet::new();
        let mut ports: Vec<Vec<Cell>> = Vec::new();
        let mut row = 0;
        for (n, line) in lines {
            for (c, ch) in line.trim_end().chars().enumerate() {
                match ch {
                    '#' => {
                        cells.insert((row, c));
                    }
                    '.' | ' ' => {}
                    'a'..='t' => {
                        let p = (ch as u8 - b'a') as usize;
                        if ports.len() <= p {
                            ports.resize(p + 1, Vec::new());
                        }
                        ports[p].push((row, c));
                        cells.insert((row, c));
                    }
                    _ => return Err(parse_err(n + 1, format!("unexpected {ch:?} in gadget picture"))),
                }
            }
            row += 1;
        }
        if let Some(p) = ports.iter().position(|g| g.is_empty()) {
            return Err(parse_err(1, format!("port {:?} is missing", (b'a' + p as u8) as char)));
        }
        PortGadget::new(Region { cells }, ports, tiles)
    }
}

/// Relation over ports: bit `p` is 1 when port `p` is claimed externally.
/// A word is allowed iff the rest of the region is exactly tileable.
pub fn verify_port_gadget(g: &PortGadget, cap: usize) -> Result<Relation> {
    let k = g.ports.len();
    if k > 20 {
        return Err(Error::CapExceeded { size: k, cap: 20 });
    }
    let mut allowed = Vec::new();
    for w in 0u64..(1 << k) {
        let removed: BTreeSet<Cell> = (0..k).filter(|&p| w >> p & 1 == 1).flat_map(|p| g.ports[p].iter().copied()).collect();
        let rest = Region { cells: g.region.cells.difference(&removed).copied().collect() };
        if tile_exact_cover(&rest, &g.tiles, cap)?.is_some() {
            allowed.push(w);
        }
    }
    Relation::new(k, allowed)
}

/// A reason the region cannot be tiled, from counting arguments alone.
pub fn checkerboard_invariant(tiles: &TileSet, r: &Region) -> Option<String> {
    let g = tiles.shapes.iter().fold(0usize, |g, s| num_integer::gcd(g, s.len()));
    if g > 0 && r.len() % g != 0 {
        return Some(format!("area {} is not a multiple of {g}", r.len()));
    }
    if tiles.only(&Shape::named("T").unwrap()) {
        // Each T covers three of one colour and one of the other.
        let black = r.cells.iter().filter(|&&(a, b)| (a + b) % 2 == 0).count() as i64;
        let white = r.len() as i64 - black;
        let (x, y) = (3 * black - white, 3 * white - black);
        if x < 0 || y < 0 || x % 8 != 0 {
            return Some(format!("colour counts ({black}, {white}) cannot be split into T pieces covering 3+1 cells"));
        }
    }
    None
}
