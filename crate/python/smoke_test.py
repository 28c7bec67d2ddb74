"""Smoke test for the `skg` extension module.

Build the extension and run this script with the built library on the path:

    cargo build --release -p skg-python --features extension-module
    cp target/release/libskg.so python/skg.so
    python3 python/smoke_test.py
"""

import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "crates", "core", "data")
sys.path.insert(0, HERE)

import skg  # noqa: E402


def load(name):
    return skg.SurfaceKnot.from_file(os.path.join(DATA, name))


def main():
    unknotted = load("unknotted.skg")
    assert unknotted.orientable and unknotted.generators == ["t"]
    c = skg.Classifier(unknotted)
    assert c.equivalent(1, "t t", "1", core_oriented=True)
    assert len(c.classes(1)) == 1

    s3 = load("s3-synthetic.skg")
    table = skg.CosetTable.enumerate(s3)
    assert table.index == 3
    assert table.contains("a") and not table.contains("b")
    c = skg.Classifier(s3)
    classes = c.classes(1, core_oriented=True)
    assert [rep for rep, _ in classes] == ["1", "b"], classes
    inv = c.invariant(1, "b", core_oriented=True)
    assert inv == c.invariant(1, "a b a", core_oriented=True)
    assert hash(inv) == hash(c.invariant(1, "a b a", core_oriented=True))
    assert str(inv) == "P(b)P#2"

    d8 = load("d8-case3.skg")
    assert all(status == "pass" for _, status, _ in skg.validate(d8))
    c = skg.Classifier(d8)
    witness = c.nonsurjectivity_witness(3, core_oriented=True)
    assert witness == c.candidate(3, ["s", "1"], core_oriented=True)
    assert not c.image_member(3, witness, core_oriented=True)
    for _, value in c.classes(3):
        assert c.image_member(3, value)

    verdict = skg.separate(load("spun-trefoil.skg"), 1, "b", "1", core_oriented=True)
    assert verdict[0] == "distinct" and verdict[1] == 3, verdict

    homs = skg.find_homomorphisms(s3, 3, limit=100)
    assert [[1, 0, 2], [1, 2, 0]] in homs

    try:
        skg.Classifier(load("spun-trefoil.skg"), max_cosets=1000)
    except skg.ResourceExhausted:
        pass
    else:
        raise AssertionError("expected ResourceExhausted")

    try:
        skg.SurfaceKnot.parse("group: a\nP: b\norientable: true")
    except ValueError as e:
        assert "b" in str(e)
    else:
        raise AssertionError("expected ValueError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
