#!/usr/bin/env python3
"""Smoke test for the zngeom Python extension.

Builds nothing itself: it locates the cdylib produced by
`cargo build -p zngeom-py [--release]`, copies it into a temp directory
under the importable name, and exercises the main types and operations.

Usage: python3 python/smoke_test.py [path/to/libzngeom.so]
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    if len(sys.argv) > 1:
        return Path(sys.argv[1])
    candidates = [
        REPO_ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libzngeom.so", "libzngeom.dylib", "zngeom.dll")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "could not find the zngeom cdylib; run "
        "`cargo build -p zngeom-py --release` first"
    )


def import_zngeom():
    lib = locate_cdylib()
    stage = Path(tempfile.mkdtemp(prefix="zngeom-smoke-"))
    suffix = ".so" if lib.suffix in (".so", ".dylib") else ".pyd"
    shutil.copy2(lib, stage / f"zngeom{suffix}")
    sys.path.insert(0, str(stage))
    import zngeom  # noqa: E402

    return zngeom


def main() -> None:
    zn = import_zngeom()
    print(f"imported zngeom {zn.__version__} ...")

    # factored modulus
    m = zn.Modulus(45)
    assert m.factors == [(3, 2), (5, 1)]
    assert m.tau == 6
    assert m.gamma == 3
    assert m.valuations(12) == [1, 0]
    assert m.valuations(0) == [2, 1]
    assert m.kernel_size(3, 2) == 9
    assert m.is_unit(4) and not m.is_unit(6)
    assert zn.Modulus(9).euler_phi() == 6
    for bad in (4, 1):
        try:
            zn.Modulus(bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"Modulus({bad}) should be rejected")

    # the full line over Z_3: pair-product histogram (5, 2, 2)
    line = zn.PointSet.full_space(3, 1)
    assert len(line) == 3
    assert zn.product_histogram(line) == {0: 5, 1: 2, 2: 2}
    assert zn.product_set(line) == [0, 1, 2]
    assert zn.covers_ring(line)
    assert zn.distance_set(line) == [0, 1]

    # sharpness construction: no unit in the dot-product set
    div = zn.PointSet.divisible(15, 2)
    assert len(div) == 25
    assert all(not zn.Modulus(15).is_unit(t) for t in zn.product_set(div))

    # second moment of the full line: 15, within its bound
    check = zn.star_second_moment_check(line, 1, "distance")
    assert check["value"] == 15
    assert check["holds"] and check["guaranteed"]
    assert zn.star_second_moment(line, 1, "distance") == 15

    # star machinery
    full_plane = zn.PointSet.full_space(5, 2)
    est, stderr, samples, exact = zn.star_average(full_plane, 1, 10**6, 0, "dot")
    assert exact and samples == 25
    assert abs(est - 121.0 / 25.0) < 1e-12

    assert zn.star_set(full_plane, [[1, 0]], "dot") == [[0], [1], [2], [3], [4]]

    # simplex types and census
    labels = zn.simplex_type([[0, 0], [1, 2], [1, 0]], 5, "distance")
    assert labels == [0, 1, 4]
    c = zn.census(full_plane, 1, "distance", "exact", 10**6, 0)
    assert c.exact and c.distinct == 5 and abs(c.density - 1.0) < 1e-12
    assert c.plateaued

    # thresholds: ring coverage bound at (9, 5) is 9^5 * 3 / 3^1.5
    bounds = dict(
        (name, bound) for name, bound, _, _ in zn.coverage_thresholds(9, 5, 35000)
    )
    expected = 3 * 9**5 / 3**1.5
    assert math.isclose(bounds["ring_coverage"], expected, rel_tol=1e-12)
    assert math.isclose(
        zn.size_bound(9, 5, 1), math.sqrt(3) * 9**5 / 3**2, rel_tol=1e-12
    )

    # transform identities at floating tolerance
    assert zn.orthogonality_max_gap(9, 2) < 1e-10
    e = zn.PointSet.uniform_random(9, 2, 12, seed=7)
    pts = e.points()
    gap = zn.star_transform_identity_gap(e, [pts[0]], [4])
    assert gap < 1e-9

    # determinism of the seeded generator
    a = zn.PointSet.uniform_random(9, 3, 50, seed=42, stream=3)
    b = zn.PointSet.uniform_random(9, 3, 50, seed=42, stream=3)
    assert a.points() == b.points()

    # deviation bound on a random set
    max_dev, bound, holds = zn.product_deviation(e)
    assert holds and max_dev <= bound

    print("OK: all smoke checks passed")


if __name__ == "__main__":
    main()
