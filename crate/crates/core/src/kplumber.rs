//! Pipe-rotation puzzles (KPlumber): rotate every tile so that all pipe ends
//! pair up across interior cell sides and none touches the outer boundary.
//!
//! Without the curve tile the puzzle is an orientation problem on the
//! checkerboard-coloured grid: an edge points into its white cell exactly
//! when a pipe crosses it. White cells count pipes, black cells count
//! non-pipes, and straight tiles become 4-alternators.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::instance::{validate, Instance, InstanceBuilder, Orientation};
use crate::kind::{Direction, VertexKind};
use crate::relation::SymmetricSpec;
use crate::solve::solve_planar_alternator_lp;

/// Pipe-end bits.
pub const N: u8 = 1;
pub const E: u8 = 2;
pub const S: u8 = 4;
pub const W: u8 = 8;
const SIDES: [u8; 4] = [N, E, S, W];

/// Cells above which the rotation search refuses to run.
pub const BRUTE_CELL_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tile {
    Empty,
    Dead,
    Straight,
    Curve,
    Tee,
    Cross,
}

impl Tile {
    pub const ALL: [Tile; 6] = [Tile::Empty, Tile::Dead, Tile::Straight, Tile::Curve, Tile::Tee, Tile::Cross];

    pub fn from_char(c: char) -> Option<Tile> {
        Some(match c {
            '0' => Tile::Empty,
            'D' => Tile::Dead,
            'S' => Tile::Straight,
            'C' => Tile::Curve,
            'T' => Tile::Tee,
            'X' => Tile::Cross,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            Tile::Empty => '0',
            Tile::Dead => 'D',
            Tile::Straight => 'S',
            Tile::Curve => 'C',
            Tile::Tee => 'T',
            Tile::Cross => 'X',
        }
    }

    fn base(self) -> u8 {
        match self {
            Tile::Empty => 0,
            Tile::Dead => N,
            Tile::Straight => N | S,
            Tile::Curve => N | E,
            Tile::Tee => N | E | S,
            Tile::Cross => N | E | S | W,
        }
    }

    /// Distinct pipe sets over all four rotations.
    pub fn rotations(self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut m = self.base();
        for _ in 0..4 {
            if !out.contains(&m) {
                out.push(m);
            }
            m = rotate(m);
        }
        out
    }

    pub fn pipes(self) -> usize {
        self.base().count_ones() as usize
    }
}

/// Quarter turn clockwise.
fn rotate(m: u8) -> u8 {
    ((m << 1) | (m >> 3)) & 0xF
}

fn opposite(side: u8) -> u8 {
    rotate(rotate(side))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGrid {
    pub tiles: Vec<Vec<Tile>>,
}

impl TileGrid {
    pub fn new(tiles: Vec<Vec<Tile>>) -> Result<TileGrid> {
        let cols = tiles.first().map_or(0, |r| r.len());
        if tiles.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("grid rows differ in length".into()));
        }
        Ok(TileGrid { tiles })
    }

    pub fn parse(text: &str) -> Result<TileGrid> {
        let mut tiles = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Option<Vec<Tile>> = line.chars().map(Tile::from_char).collect();
            let row = row.ok_or_else(|| parse_err(i + 1, format!("unknown tile in {line:?}")))?;
            if tiles.first().is_some_and(|r: &Vec<Tile>| r.len() != row.len()) {
                return Err(parse_err(i + 1, "row length differs from the first row"));
            }
            tiles.push(row);
        }
        Ok(TileGrid { tiles })
    }

    pub fn rows(&self) -> usize {
        self.tiles.len()
    }

    pub fn cols(&self) -> usize {
        self.tiles.first().map_or(0, |r| r.len())
    }

    pub fn has_curve(&self) -> bool {
        self.tiles.iter().flatten().any(|&t| t == Tile::Curve)
    }

    fn neighbour(&self, r: usize, c: usize, side: u8) -> Option<(usize, usize)> {
        match side {
            N if r > 0 => Some((r - 1, c)),
            S if r + 1 < self.rows() => Some((r + 1, c)),
            W if c > 0 => Some((r, c - 1)),
            E if c + 1 < self.cols() => Some((r, c + 1)),
            _ => None,
        }
    }
}

impl fmt::Display for TileGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.tiles {
            writeln!(f, "{}", row.iter().map(|t| t.to_char()).collect::<String>())?;
        }
        Ok(())
    }
}

/// Pipe set of every cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotatedGrid {
    pub cells: Vec<Vec<u8>>,
}

impl RotatedGrid {
    /// Whether this is a valid solution of `g`.
    pub fn solves(&self, g: &TileGrid) -> bool {
        if self.cells.len() != g.rows() || self.cells.iter().any(|r| r.len() != g.cols()) {
            return false;
        }
        for (r, row) in g.tiles.iter().enumerate() {
            for (c, &t) in row.iter().enumerate() {
                let m = self.cells[r][c];
                if !t.rotations().contains(&m) {
                    return false;
                }
                for side in SIDES {
                    let here = m & side != 0;
                    let there = g.neighbour(r, c, side).is_some_and(|(r2, c2)| self.cells[r2][c2] & opposite(side) != 0);
                    if here != there {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Pipe-set names per cell, e.g. `"NS"`, `""` for none.
    pub fn names(&self) -> Vec<Vec<String>> {
        self.cells.iter().map(|r| r.iter().map(|&m| side_names(m)).collect()).collect()
    }
}

fn side_names(m: u8) -> String {
    SIDES.iter().zip("NESW".chars()).filter(|(&s, _)| m & s != 0).map(|(_, ch)| ch).collect()
}

const GLYPHS: [char; 16] = ['·', '╵', '╶', '└', '╷', '│', '┌', '├', '╴', '┘', '─', '┴', '┐', '┤', '┬', '┼'];

pub fn render(rg: &RotatedGrid) -> String {
    let mut out = String::new();
    for row in &rg.cells {
        out.extend(row.iter().map(|&m| GLYPHS[m as usize]));
        out.push('\n');
    }
    out
}

pub fn parse_rendered(text: &str) -> Result<RotatedGrid> {
    let mut cells = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Option<Vec<u8>> = line.trim().chars().map(|ch| GLYPHS.iter().position(|&g| g == ch).map(|m| m as u8)).collect();
        cells.push(row.ok_or_else(|| parse_err(i + 1, "unknown glyph"))?);
    }
    Ok(RotatedGrid { cells })
}

/// Orientation instance of a curveless grid, with the maps back to cells.
#[derive(Debug, Clone)]
pub struct Translation {
    pub instance: Instance,
    /// Vertex of each cell.
    pub cell_vertex: Vec<Vec<usize>>,
    /// Edge across each interior side, indexed `[r][c][k]` for `SIDES[k]`.
    pub side_edge: Vec<Vec<[Option<usize>; 4]>>,
    /// Whether cell `(0, 0)` is white.
    pub white_origin: bool,
}

impl Translation {
    fn is_white(&self, r: usize, c: usize) -> bool {
        ((r + c) % 2 == 0) == self.white_origin
    }

    /// Read pipe sets off an orientation.
    pub fn pipes(&self, o: &Orientation) -> RotatedGrid {
        let cells = self
            .side_edge
            .iter()
            .map(|row| {
                row.iter()
                    .map(|sides| {
                        (0..4).filter(|&k| sides[k].is_some_and(|e| o.0[e])).fold(0u8, |m, k| m | SIDES[k])
                    })
                    .collect()
            })
            .collect();
        RotatedGrid { cells }
    }
}

/// Counter-clockwise side order used for ports and rotations.
const CCW: [u8; 4] = [E, N, W, S];

fn side_index(side: u8) -> usize {
    SIDES.iter().position(|&s| s == side).unwrap()
}

pub fn to_instance(g: &TileGrid) -> Result<Translation> {
    to_instance_colored(g, true)
}

/// As `to_instance`, choosing which colour cell `(0, 0)` gets.
pub fn to_instance_colored(g: &TileGrid, white_origin: bool) -> Result<Translation> {
    if g.has_curve() {
        return Err(Error::PolyFragmentViolation("the grid contains curve tiles".into()));
    }
    let (rows, cols) = (g.rows(), g.cols());
    let mut t = Translation {
        instance: InstanceBuilder::new().build()?,
        cell_vertex: vec![vec![0; cols]; rows],
        side_edge: vec![vec![[None; 4]; cols]; rows],
        white_origin,
    };
    let mut b = InstanceBuilder::new();
    // Port of each present side, per cell.
    let mut port = vec![vec![[None::<usize>; 4]; cols]; rows];
    let mut leaves = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let tile = g.tiles[r][c];
            let white = t.is_white(r, c);
            let name = format!("r{r}c{c}");
            let v;
            if tile == Tile::Straight {
                v = b.add_vertex(name, VertexKind::Alternator(4));
                for (p, &side) in CCW.iter().enumerate() {
                    port[r][c][side_index(side)] = Some(p);
                    if g.neighbour(r, c, side).is_none() {
                        // No pipe: out of a white cell, into a black one.
                        leaves.push((v, p, if white { Direction::In } else { Direction::Out }));
                    }
                }
                b.set_rotation(v, (0..4).collect());
            } else {
                let i = if white { tile.pipes() } else { 4 - tile.pipes() };
                let mut spec = SymmetricSpec::exactly(i, 4);
                let mut p = 0;
                for &side in &CCW {
                    if g.neighbour(r, c, side).is_some() {
                        port[r][c][side_index(side)] = Some(p);
                        p += 1;
                    } else {
                        spec = spec.condition(!white);
                    }
                }
                v = b.add_vertex(name, VertexKind::Symmetric(spec));
                b.set_rotation(v, (0..p).collect());
            }
            t.cell_vertex[r][c] = v;
        }
    }
    for (v, p, d) in leaves {
        let l = b.add_vertex(format!("boundary{v}p{p}"), VertexKind::Constant(d));
        b.set_rotation(l, vec![0]);
        b.add_edge(v, p, l, 0);
    }
    for r in 0..rows {
        for c in 0..cols {
            for side in [E, S] {
                let Some((r2, c2)) = g.neighbour(r, c, side) else {
                    continue;
                };
                let (k1, k2) = (side_index(side), side_index(opposite(side)));
                let (p1, p2) = (port[r][c][k1].unwrap(), port[r2][c2][k2].unwrap());
                let (v1, v2) = (t.cell_vertex[r][c], t.cell_vertex[r2][c2]);
                // A is the black end, so `true` means a pipe.
                let e = if t.is_white(r, c) { b.add_edge(v2, p2, v1, p1) } else { b.add_edge(v1, p1, v2, p2) };
                t.side_edge[r][c][k1] = Some(e);
                t.side_edge[r2][c2][k2] = Some(e);
            }
        }
    }
    t.instance = b.build()?;
    Ok(t)
}

/// Solve a grid. Curve tiles need `allow_brute`, which runs the rotation
/// search on grids of at most `BRUTE_CELL_CAP` cells.
pub fn solve_kplumber(g: &TileGrid, allow_brute: bool) -> Result<Option<RotatedGrid>> {
    if g.has_curve() {
        if !allow_brute {
            return Err(Error::PolyFragmentViolation(
                "curve tiles make the puzzle NP-complete; pass allow_brute for small grids".into(),
            ));
        }
        let cells = g.rows() * g.cols();
        if cells > BRUTE_CELL_CAP {
            return Err(Error::CapExceeded { size: cells, cap: BRUTE_CELL_CAP });
        }
        return Ok(solve_rotations_brute(g));
    }
    let t = to_instance(g)?;
    // A cell conditioned down to an empty in-set can never be satisfied.
    if t.instance.kinds().iter().any(|k| matches!(k, VertexKind::Symmetric(s) if s.in_set.is_empty())) {
        return Ok(None);
    }
    let Some(o) = solve_planar_alternator_lp(&t.instance)? else {
        return Ok(None);
    };
    if !validate(&t.instance, &o).is_empty() {
        return Err(Error::Internal("LP orientation does not validate".into()));
    }
    let rg = t.pipes(&o);
    if !rg.solves(g) {
        return Err(Error::Internal("decoded pipes do not solve the grid".into()));
    }
    Ok(Some(rg))
}

/// Backtracking over cell rotations in row-major order.
pub fn solve_rotations_brute(g: &TileGrid) -> Option<RotatedGrid> {
    let (rows, cols) = (g.rows(), g.cols());
    let mut cells = vec![vec![0u8; cols]; rows];
    fn go(g: &TileGrid, cells: &mut Vec<Vec<u8>>, i: usize) -> bool {
        let (rows, cols) = (g.rows(), g.cols());
        if i == rows * cols {
            return true;
        }
        let (r, c) = (i / cols, i % cols);
        for m in g.tiles[r][c].rotations() {
            // Sides towards placed cells must match; sides on the boundary
            // must be empty.
            let ok = SIDES.iter().all(|&side| match g.neighbour(r, c, side) {
                None => m & side == 0,
                Some((r2, c2)) if (r2, c2) < (r, c) => (m & side != 0) == (cells[r2][c2] & opposite(side) != 0),
                Some(_) => true,
            });
            if ok {
                cells[r][c] = m;
                if go(g, cells, i + 1) {
                    return true;
                }
            }
        }
        false
    }
    if rows * cols == 0 || go(g, &mut cells, 0) {
        Some(RotatedGrid { cells })
    } else {
        None
    }
}

/// Random grid of the given tiles.
pub fn random_grid<R: rand::Rng>(rng: &mut R, rows: usize, cols: usize, tiles: &[Tile]) -> TileGrid {
    TileGrid { tiles: (0..rows).map(|_| (0..cols).map(|_| tiles[rng.gen_range(0..tiles.len())]).collect()).collect() }
}

/// Random solvable curveless grid: pipes are added one interior side at a
/// time whenever neither cell becomes a curve.
pub fn random_solvable_grid<R: rand::Rng>(rng: &mut R, rows: usize, cols: usize) -> TileGrid {
    let mut m = vec![vec![0u8; cols]; rows];
    let g = TileGrid { tiles: vec![vec![Tile::Empty; cols]; rows] };
    let mut sides = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            for side in [E, S] {
                if let Some(n) = g.neighbour(r, c, side) {
                    sides.push(((r, c), side, n));
                }
            }
        }
    }
    let is_curve = |x: u8| x.count_ones() == 2 && x != (N | S) && x != (E | W);
    for _ in 0..3 {
        for &((r, c), side, (r2, c2)) in &sides {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let (a, b) = (m[r][c] ^ side, m[r2][c2] ^ opposite(side));
            if !is_curve(a) && !is_curve(b) {
                m[r][c] = a;
                m[r2][c2] = b;
            }
        }
    }
    let tile_of = |x: u8| match x.count_ones() {
        0 => Tile::Empty,
        1 => Tile::Dead,
        2 => Tile::Straight,
        3 => Tile::Tee,
        _ => Tile::Cross,
    };
    TileGrid { tiles: m.iter().map(|r| r.iter().map(|&x| tile_of(x)).collect()).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::solve_brute;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(s: &str) -> TileGrid {
        TileGrid::parse(s).unwrap()
    }

    #[test]
    fn translation_examples() {
        let t = to_instance(&grid("DD")).unwrap();
        assert_eq!(t.instance.num_edges(), 1);
        assert_eq!(t.instance.kind(0), &VertexKind::exactly(1, 1));
        // The black cell counts non-pipes.
        assert_eq!(t.instance.kind(1), &VertexKind::exactly(0, 1));
        assert!(solve_kplumber(&grid("DD"), false).unwrap().is_some());

        let t = to_instance(&grid("X")).unwrap();
        assert_eq!(t.instance.kind(0), &VertexKind::sym(0, &[]));
        assert!(solve_kplumber(&grid("X"), false).unwrap().is_none());
        assert!(solve_kplumber(&grid("0"), false).unwrap().is_some());
    }

    #[test]
    fn curves_need_the_flag() {
        let g = grid("CC\nCC");
        assert!(matches!(solve_kplumber(&g, false), Err(Error::PolyFragmentViolation(_))));
        let rg = solve_kplumber(&g, true).unwrap().unwrap();
        assert!(rg.solves(&g));
    }

    #[test]
    fn corner_cross_is_unsat() {
        for g in ["X0\n00", "0X\n00", "SS\nSX", "TTT\nTTX"] {
            assert!(solve_kplumber(&grid(g), false).unwrap().is_none(), "{g}");
        }
    }

    #[test]
    fn straight_square() {
        let g = grid("SS\nSS");
        assert_eq!(solve_kplumber(&g, false).unwrap().is_some(), solve_rotations_brute(&g).is_some());
    }

    #[test]
    fn grid_text_round_trip() {
        let text = "0DS\nCTX\n";
        assert_eq!(TileGrid::parse(text).unwrap().to_string(), text);
    }

    #[test]
    fn render_round_trip() {
        let rg = RotatedGrid { cells: vec![vec![0, E, N | S], (0..16).collect::<Vec<u8>>()[..3].to_vec()] };
        assert_eq!(render(&rg).lines().next().unwrap(), "·╶│");
        assert_eq!(parse_rendered(&render(&rg)).unwrap(), rg);
        let all = RotatedGrid { cells: vec![(0..16).collect()] };
        assert_eq!(parse_rendered(&render(&all)).unwrap(), all);
        assert_eq!(side_names(N | S | W), "NSW");
    }

    #[test]
    fn translation_matches_instance_oracle() {
        // The instance itself agrees with brute-force orientation search.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let curveless = [Tile::Empty, Tile::Dead, Tile::Straight, Tile::Tee, Tile::Cross];
        for _ in 0..300 {
            let g = random_grid(&mut rng, 2, 3, &curveless);
            let t = to_instance(&g).unwrap();
            let truth = solve_rotations_brute(&g).is_some();
            assert_eq!(solve_brute(&t.instance).unwrap().is_some(), truth, "{g}");
            assert_eq!(solve_kplumber(&g, false).unwrap().is_some(), truth, "{g}");
        }
    }

    #[test]
    fn colour_flip_keeps_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let curveless = [Tile::Empty, Tile::Dead, Tile::Straight, Tile::Tee, Tile::Cross];
        for _ in 0..200 {
            let g = random_grid(&mut rng, 3, 3, &curveless);
            let a = solve_brute(&to_instance_colored(&g, true).unwrap().instance).unwrap();
            let b = solve_brute(&to_instance_colored(&g, false).unwrap().instance).unwrap();
            assert_eq!(a.is_some(), b.is_some(), "{g}");
            assert_eq!(a.is_some(), solve_kplumber(&g, false).unwrap().is_some(), "{g}");
        }
    }

    #[test]
    fn planted_grids_are_solved() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let g = random_solvable_grid(&mut rng, 4, 5);
            assert!(!g.has_curve());
            assert!(solve_kplumber(&g, false).unwrap().is_some(), "{g}");
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(TileGrid::parse("00\n0Q").unwrap_err(), parse_err(2, "unknown tile in \"0Q\""));
        assert!(matches!(TileGrid::parse("00\n0").unwrap_err(), Error::Parse { line: 2, .. }));
    }
}
