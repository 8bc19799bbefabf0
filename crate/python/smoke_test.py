"""Smoke test for the pyrenyi extension.

Build first with `cargo build -p renyi-py`, then run
`python3 python/smoke_test.py`. The module is loaded straight from
PYRENYI_LIB, an importable `pyrenyi`, or target/debug, in that order.
"""

import importlib.machinery
import importlib.util
import os
import pathlib
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    path = os.environ.get("PYRENYI_LIB")
    if path is None:
        try:
            import pyrenyi

            return pyrenyi
        except ImportError:
            pass
    if path is None:
        for profile in ("debug", "release"):
            candidate = ROOT / "target" / profile / "libpyrenyi.so"
            if candidate.exists():
                path = str(candidate)
                break
    if path is None:
        sys.exit("libpyrenyi.so not found; run `cargo build -p renyi-py` first")
    loader = importlib.machinery.ExtensionFileLoader("pyrenyi", path)
    spec = importlib.util.spec_from_file_location("pyrenyi", path, loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    r = load()
    faces = [str(i) for i in range(1, 7)]

    # conditioning is exact and scale free
    die = r.RenyiState(r.Measure.counting(faces))
    tripled = r.RenyiState(r.Measure({f: 3 for f in faces}))
    assert die == tripled
    evens = ["2", "4", "6"]
    assert die.condition(evens) == Fraction(1, 2)
    assert tripled.condition(["2"], given=evens) == Fraction(1, 3)
    face = {f: int(f) for f in faces}
    assert die.condition(face, given=evens) == 4

    # weights may be given as strings
    mu = r.Measure({"a": "1", "b": "2", "c": Fraction(3)})
    p = r.RenyiState(mu)
    assert p.condition(["a"], given=["a", "b"]) == Fraction(1, 3)
    assert not p.is_elementary([]) and p.is_elementary(["c"])
    assert len(p.maximal_bunch()) == 7

    # families: generate, check, reconstruct, perturb
    family = r.ConditionalFamily.generate(p, [["a"], ["a", "b"]])
    assert family.check() is None
    assert family.reconstruct() == p
    tables = [(b, family.table(b)) for b in family.conditions()]
    bad = [(b, ({"a": Fraction(1, 2), "b": Fraction(1, 2)} if b == ["a", "b"] else t)) for b, t in tables]
    violation = r.ConditionalFamily(["a", "b", "c"], bad).check()
    assert violation is not None, "perturbed family accepted"
    try:
        r.ConditionalFamily(["a", "b", "c"], bad).reconstruct()
    except r.RenyiError:
        pass
    else:
        raise AssertionError("reconstruct accepted an inconsistent family")

    # disintegration along parity
    parity = r.Statistic({f: ("even" if int(f) % 2 == 0 else "odd") for f in faces})
    counting = r.disintegrate(die, parity, "counting")
    assert counting.kernel("even") == {f: Fraction(int(f) % 2 == 0) for f in faces}
    pushed = r.disintegrate(r.RenyiState(r.Measure({f: Fraction(1, 6) for f in faces})), parity, "pushforward")
    assert sum(pushed.kernel("odd").values()) == 1
    assert pushed.kernel_mass(face, "odd") == 3
    assert counting.conditional_given(face, ["1", "2", "3", "4"], "even") == 3
    assert counting.verify_factorization(face, ["1", "2", "3", "4"])
    uniform = r.RenyiState(r.Measure({f: Fraction(1, 6) for f in faces}))
    assert r.kolmogorov_conditional(uniform, face, parity, "even") == 4
    try:
        r.disintegrate(die, parity, {"even": 1, "odd": 0})
    except r.RenyiError:
        pass
    else:
        raise AssertionError("non-dominating nu accepted")

    # model files
    model = r.parse_model((ROOT / "models" / "die.model").read_text())
    assert model.state().condition(model.function("face"), given=model.event("evens")) == 4
    assert r.parse_model(model.emit()).emit() == model.emit()
    family = r.parse_model((ROOT / "models" / "abc-family.model").read_text()).family()
    assert family.check() is None

    try:
        r.Measure({"a": 0.5})
    except r.RenyiError:
        pass
    else:
        raise AssertionError("float weight accepted")

    print("pyrenyi smoke test: ok")


if __name__ == "__main__":
    main()
