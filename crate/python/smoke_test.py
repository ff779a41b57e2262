"""Smoke test for the Python bindings.

Uses an installed `cuspforge` package when present (``maturin develop`` in
crates/python); otherwise loads the library built by
``cargo build -p cuspforge-py --features extension-module``.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import cuspforge
        return cuspforge
    except ImportError:
        pass
    sys.path.insert(0, str(ROOT / "crates" / "python" / "python"))
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libcuspforge_py.so"
        if lib.exists():
            break
    else:
        sys.exit("build the extension first: cargo build -p cuspforge-py --features extension-module")
    name = "cuspforge.cuspforge_py"
    loader = importlib.machinery.ExtensionFileLoader(name, str(lib))
    spec = importlib.util.spec_from_file_location(name, str(lib), loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    sys.modules[name] = module
    import cuspforge
    return cuspforge


def main():
    cf = load()

    assert cf.gosset_counts(3) == (6, 5), cf.gosset_counts(3)
    assert cf.gosset_counts(8) == (240, 19440)

    m3 = cf.census(3)
    assert m3["total"] == 12, m3
    m8 = cf.census(8)
    assert m8["total"] == 2160 * 2**226
    assert m8["magnitude"].startswith("2.3"), m8["magnitude"]

    with tempfile.TemporaryDirectory() as tmp:
        run = cf.pipeline(3, out_dir=tmp)
        assert run["report"]["dirac"] == "Discrete", run["report"]
        assert len(run["report"]["cusps"]) == 12
        assert (pathlib.Path(tmp) / "report.json").exists()

    try:
        cf.pipeline(3, budget=10)
    except cf.CuspforgeError as err:
        code, _message, exit_code = err.args
        assert exit_code == 3, err.args
    else:
        raise AssertionError("a budget of 10 cells should be exceeded")

    try:
        cf.census(9)
    except cf.CuspforgeError as err:
        assert err.args[2] == 2, err.args
    else:
        raise AssertionError("n = 9 should be rejected")

    report = cf.verify("homology")
    assert all(c["passed"] for c in report["checks"]), report
    print("smoke test passed")


if __name__ == "__main__":
    main()
