"""Builds the extension module and exercises it once.

    python3 python/smoke.py [--release]
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build(release: bool) -> Path:
    cmd = ["cargo", "build", "-p", "tamekey-py"] + (["--release"] if release else [])
    subprocess.run(cmd, cwd=ROOT, check=True)
    lib = ROOT / "target" / ("release" if release else "debug") / "libtamekey_py.so"
    out = Path(tempfile.mkdtemp()) / "tamekey.so"
    shutil.copy(lib, out)
    return out.parent


def main() -> int:
    sys.path.insert(0, str(build("--release" in sys.argv)))
    import tamekey as tk

    q = tk.Field.rationals()
    x = "t^(1/2) + t^(2/3)"
    assert tk.delta(q, ["-t", "0", "1"], x) == "2/3"
    seq = tk.key_sequence(q, x)
    assert seq["degrees"] == [1, 2, 6], seq["degrees"]
    assert seq["deltas"] == ["1/2", "2/3", "inf"], seq["deltas"]
    assert tk.kras(q, x) == "2/3"
    assert tk.degree(q, x) == 6 and tk.ramification(q, x) == (6, 1)
    assert len(tk.min_poly(q, x)) == 7

    f25 = tk.Field.finite(5, "s^2 - 2")
    assert tk.ramification(tk.Field.prime(5), "t^(1/2)") == (2, 1)
    assert len(tk.roots(tk.Field.prime(5), ["-t", "0", "1"])) == 2
    assert f25.series("s*t^(1/2) + 0*t") == "s*t^(1/2)"

    try:
        q.series("t^(1/2) +")
    except ValueError as e:
        assert "line 1" in str(e), e
    else:
        raise AssertionError("malformed literal accepted")

    worked = ROOT / "crates" / "core" / "scenarios" / "01_worked.toml"
    report = tk.run_scenario(str(worked), "keyseq")
    assert report["pass"] and "timing_ms" not in report
    print(json.dumps({"delta": "2/3", "degrees": seq["degrees"], "rows": len(report["assertions"])}))
    print("smoke ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
