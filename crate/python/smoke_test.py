#!/usr/bin/env python3
"""Smoke test for the deltav_py bindings.

Builds nothing itself: run `cargo build -p deltav-py` first, then
`python3 python/smoke_test.py`.
"""

import json
import shutil
import sys
import sysconfig
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

GOLDEN = "y^2 = 8*x^6 + x^3 + 2"


def locate_module():
    ext = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    for profile in ("debug", "release"):
        for name in ("libdeltav_py.so", "deltav_py.dll", "libdeltav_py.dylib"):
            cdylib = ROOT / "target" / profile / name
            if cdylib.exists():
                dest = cdylib.parent / f"deltav_py{ext}"
                if not dest.exists() or cdylib.stat().st_mtime > dest.stat().st_mtime:
                    shutil.copy2(cdylib, dest)
                return dest.parent
    sys.exit("build the extension first: cargo build -p deltav-py")


sys.path.insert(0, str(locate_module()))
import deltav_py  # noqa: E402

assert deltav_py.genus(GOLDEN, 2) == 2
assert deltav_py.jumps(GOLDEN, 2) == [("1/6", 1), ("1/2", 1)]
assert deltav_py.stabilisation_index(GOLDEN, 2) == 6
assert deltav_py.regularity(GOLDEN, 2) == "pass"
assert deltav_py.vcan(GOLDEN, 2, "2*w(1,1) + w(2,1)") == "-1/2"
assert deltav_py.vcan(GOLDEN, 2, "0") == "infinity"

report = json.loads(deltav_py.analyze(GOLDEN, 2))
assert report["genus"] == 2
assert report["jumps"] == [["1/6", 1], ["1/2", 1]]
assert report["regular"] == "pass"
assert [f["delta"] for f in report["faces"]] == [6, 2]
assert [pt["vcan"] for pt in report["interior_points"]] == ["-1/6", "-1/2"]

bc = json.loads(deltav_py.base_change(GOLDEN, 2, 5))
assert bc["relative_jumps"] == ["0", "2/5"]
assert bc["lattice_exponents"] == [0, 2]

svg = deltav_py.svg(GOLDEN, 2)
assert svg.startswith("<svg") and ">1/6<" in svg

assert deltav_py.jumps("y^2 = x^3 + 5", 5) == [("1/6", 1)]

try:
    deltav_py.analyze("y^2 = 8*x^6 + + 2", 2)
except ValueError as e:
    assert "byte" in str(e)
else:
    sys.exit("expected a parse error")

print("smoke test: ok")
