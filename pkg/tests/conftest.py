import json

import numpy as np
import pytest

from gcsfluct import gcs


def _write(path, mat, n, kind="gcs"):
    path.write_text(json.dumps({"n": n, "kind": kind, "matrix": np.asarray(mat).ravel().tolist()}))
    return path


@pytest.fixture
def matrix_files(tmp_path):
    """Valid, axiom-violating and malformed matrix documents."""
    sym = gcs.build_symplectic_gcs(gcs.SymplecticForm.standard(1))
    cplx = gcs.build_complex_gcs(gcs.ComplexStructure.standard(2))
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    wrong_size = tmp_path / "wrong_size.json"
    wrong_size.write_text(json.dumps({"n": 2, "matrix": [0.0] * 16}))
    return {
        "symplectic": _write(tmp_path / "sym.json", sym.mat, 1),
        "complex": _write(tmp_path / "cplx.json", cplx.mat, 2),
        "btransformed": _write(
            tmp_path / "symb.json",
            gcs.b_transform_gcs(sym, gcs.TwoForm([[0.0, 2 / 3], [-2 / 3, 0.0]])).mat, 1),
        "omega": _write(tmp_path / "omega.json", gcs.SymplecticForm.standard(2).mat, 2, "omega"),
        "identity": _write(tmp_path / "eye.json", np.eye(4), 1),
        "bad_json": bad_json,
        "wrong_size": wrong_size,
        "missing": tmp_path / "nope.json",
    }


ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, title, passed, detail)."""
    def record(number, title, passed, detail=""):
        ACCEPTANCE.append((number, title, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
