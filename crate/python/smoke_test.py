"""Smoke test for the orientkit_py extension.

Builds the extension with cargo when it is not importable, then exercises
each binding once.
"""
import importlib
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        return importlib.import_module("orientkit_py")
    except ImportError:
        pass
    subprocess.run(["cargo", "build", "--release", "-p", "orientkit-py"], cwd=ROOT, check=True)
    built = os.path.join(ROOT, "target", "release", "liborientkit_py.so")
    tmp = tempfile.mkdtemp()
    shutil.copy(built, os.path.join(tmp, "orientkit_py.so"))
    sys.path.insert(0, tmp)
    return importlib.import_module("orientkit_py")


TRIANGLE = """vertex a sym 2 S=1
vertex b sym 2 S=1
vertex c sym 2 S=1
edge a.1 b.0
edge b.1 c.0
edge c.1 a.0
"""


def main():
    ok = load()

    alg, o = ok.solve(TRIANGLE)
    assert alg == "2sat" and o is not None and len(o) == 3, (alg, o)
    assert ok.solve(TRIANGLE, algorithm="brute")[1] is not None

    tag, route = ok.classify("{0,3}-in-3\n1-in-3\n", constants=True)
    assert tag == "NPComplete", (tag, route)
    assert ok.classify("1-in-3\neq 5\n", planar=True) == ("P", "k5")
    assert ok.classify("{1,4}-in-8\n{0,2}-in-2\n")[0] == "Unknown"

    assert sorted(ok.expand_kind("sym 3 S=1")) == ["001", "010", "100"]
    assert ok.simulate("external x\nexternal y\nvertex a sym 2 S=1\nedge x.0 a.0\nedge a.1 y.0\n") == ["10", "01"]

    assert ok.kplumber("XS\nSS\n") is None
    assert ok.kplumber("DD\n") is not None

    assert ok.tile("##\n##\n", "O") == [[(0, 0), (0, 1), (1, 0), (1, 1)]]
    assert ok.tile("###\n###\n", "O") is None
    assert ok.tile("####\n####\n####\n####\n", "S") is None

    results = ok.verify_gadgets()
    assert results and all(p for _, p in results), results

    try:
        ok.solve("vertex a sym 2 S=1\nedge a.0\n")
    except ValueError as e:
        assert "line 2" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("smoke test passed")


if __name__ == "__main__":
    main()
