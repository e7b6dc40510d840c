"""Smoke test for the profscope Python extension.

Build first:
    cargo build --release -p profscope-py --features extension-module
then run:
    python3 python/smoke_test.py

The script loads target/release/libprofscope_py.so (override with the
PROFSCOPE_LIB environment variable) under the module name ``profscope``.
"""

import importlib.machinery
import importlib.util
import json
import os
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    default = ROOT / "target" / "release" / "libprofscope_py.so"
    path = pathlib.Path(os.environ.get("PROFSCOPE_LIB", default))
    if not path.exists():
        sys.exit(f"extension not found at {path}; build it first (see module docstring)")
    loader = importlib.machinery.ExtensionFileLoader("profscope", str(path))
    spec = importlib.util.spec_from_loader("profscope", loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    ps = load()

    c2 = ps.Group.cyclic(2)
    s3 = ps.Group.dihedral(3)
    assert (c2.order, s3.order) == (2, 6)
    assert s3.subgroup_count() == 6
    assert (s3.frattini_order(), s3.psi_order()) == (1, 3)
    v4 = c2.direct_product(c2)
    assert v4.is_abelian() and v4.subgroup_count() == 5
    assert ps.Group.from_table(v4.table(), "V4").order == 4

    p2 = ps.Tower.padic(2)
    c = p2.classify(depth=8)
    assert (c["verdict"], c["signature"], c["certified"]) == ("COUNTABLE", "w^1*1+1", True)
    assert list(c)[:4] == ["space", "verdict", "k", "n"]
    verdicts = p2.isolation_verdicts(6)
    assert sum(v["isolated"] == "NO" for v in verdicts) == 1

    both = ps.Tower.product(p2, ps.Tower.padic(3))
    assert both.growth_sequence(2) == [1, 4, 9]
    assert both.classify(depth=4)["signature"] == "w^2*1+1"

    ft = ps.Tower.finite_times(c2, p2)
    assert ft.classify(depth=8)["n"] == 2

    torsion = ps.Tower.torsion(c2)
    assert torsion.growth_sequence(4) == [1, 2, 5, 16, 67]
    assert torsion.classify(depth=4)["verdict"] == "CANTOR"
    assert torsion.perfectness()["value"] == "YES"
    try:
        torsion.level(20)
    except ps.BudgetError:
        pass
    else:
        raise AssertionError("expected a budget error")

    w = ps.Signature(1, 1)
    assert str(w.product(w)) == "w^2*1+1"
    assert w.product(w) == ps.Signature.parse("w^2*1+1")
    try:
        ps.Signature.parse("w^0*3+1")
    except ps.ProfscopeError:
        pass
    else:
        raise AssertionError("expected a parse error")

    try:
        ps.Tower.padic(4)
    except ps.ProfscopeError as e:
        assert "p must be prime" in str(e)
    else:
        raise AssertionError("expected an invalid-input error")

    code, out, err = ps.run_config(json.dumps({"tower": {"kind": "padic", "p": 2}}), "classify")
    assert code == 0 and err == "", err
    report = json.loads(out)
    assert report["tool"] == "profscope" and report["version"] == ps.__version__
    code, out, _ = ps.run_config(json.dumps({"tower": {"kind": "torsion", "group": {"cyclic": 2}}, "depth": 20}), "space")
    assert code == 3 and out == ""

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
