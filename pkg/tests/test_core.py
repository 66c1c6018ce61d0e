import pytest

from app.api.endpoints.system import format_uptime
from app.core.config import settings
from app.core.errors import DegenerateSlice, InvariantViolation, SolverInconclusive
from app.core.tolerance import Tolerance, resolve


def test_tolerance_bound():
    tol = Tolerance(abs_tol=1e-9, rel_tol=1e-6)
    assert tol.bound(10.0) == pytest.approx(1e-9 + 1e-5)
    assert tol.is_zero(5e-6, scale=10.0)
    assert not tol.is_zero(1e-4, scale=10.0)


def test_default_tolerance_follows_settings():
    tol = resolve(None)
    assert tol.abs_tol == settings.TOL_ABS
    assert tol.rel_tol == settings.TOL_REL


def test_error_codes_and_body():
    err = InvariantViolation("off the quadric", {"indices": [3]})
    assert (err.exit_code, err.status_code) == (2, 400)
    assert err.to_dict() == {"detail": "off the quadric", "error": "InvariantViolation",
                             "context": {"indices": [3]}}
    assert DegenerateSlice("x").exit_code == 3
    assert SolverInconclusive("x").exit_code == 4


def test_format_uptime():
    assert format_uptime(5) == "5s"
    assert format_uptime(3 * 3600 + 61) == "3h 1m 1s"
    assert format_uptime(2 * 86400) == "2d 0s"
