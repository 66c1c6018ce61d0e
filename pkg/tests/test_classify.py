import importlib

import numpy as np
import pytest

from app.core.errors import DegenerateCube, SolverInconclusive
from app.geometry.analysis.classify import classify
from app.geometry.analysis.types import (
    DEGREE_TABLE,
    CoarseType,
    CurveDescriptor,
    CurveKind,
    SingularLocus,
    Subtype,
    TracedCurve,
)
from app.geometry.canonical import build_family, type_a_cube
from app.geometry.qb import DCCube
from app.geometry.quat import random_mobius

classify_module = importlib.import_module("app.geometry.analysis.classify")


@pytest.mark.parametrize("label, params, subtype", [
    ("S1", None, Subtype.S1),
    ("S2", None, Subtype.S2),
    ("S3", None, Subtype.S3),
    ("S4", None, Subtype.S4),
    ("A", [1.0, 2.0, 3.0], Subtype.A1),
    ("A", [3.0, 1.0, -2.0], Subtype.A2),
    ("A", [0.0, 0.5, -1.0], Subtype.A3),
    ("A4", None, Subtype.A4),
    ("B", [2.0, 1.5], Subtype.B),
    ("TwoPlane", None, Subtype.B),
    ("O1", [0.5], Subtype.O1),
    ("O2", None, Subtype.O2),
])
def test_catalog_classification(label, params, subtype):
    family = build_family(label, params)
    result = classify(family.cube)
    assert result.subtype == subtype
    assert result.coarse == subtype.coarse
    assert family.expected.subtype == subtype


def test_a4_reports_two_lines():
    result = classify(build_family("A4").cube)
    assert [d.kind for d in result.singular].count(CurveKind.LINE) == 2


def test_spherical_report():
    result = classify(build_family("S1").cube)
    assert result.coarse == CoarseType.SPHERICAL
    assert [d.kind for d in result.singular] == [CurveKind.LINE, CurveKind.LINE]
    assert any("disjoint" in note for note in result.notes)


def _fake_locus(kinds):
    curves = [
        TracedCurve(CurveDescriptor(kind, direction=d), None, np.zeros((2, 3)), np.zeros((2, 3)))
        for d, kind in enumerate(kinds)
    ]
    return SingularLocus(curves=curves)


def test_spherical_curves_come_from_tracing(monkeypatch):
    locus = _fake_locus([CurveKind.LINE, CurveKind.LINE])
    monkeypatch.setattr(classify_module, "singular_locus", lambda *args, **kwargs: locus)
    result = classify(build_family("S1").cube)
    assert result.singular == locus.descriptors()
    assert all(d.confidence == 1.0 for d in result.singular)
    assert "singular curves traced; multiplicities from the normal form" in result.notes


def test_spherical_curves_fall_back_to_normal_form(monkeypatch):
    monkeypatch.setattr(classify_module, "singular_locus",
                        lambda *args, **kwargs: _fake_locus([CurveKind.CURVE]))
    result = classify(build_family("S1").cube)
    assert [d.kind for d in result.singular] == [CurveKind.LINE, CurveKind.LINE]
    assert all(d.confidence == 0.5 for d in result.singular)
    assert any("differ from the normal form" in note for note in result.notes)


def test_spherical_tracing_failure_falls_back(monkeypatch):
    def fail(*args, **kwargs):
        raise SolverInconclusive("no crossings")

    monkeypatch.setattr(classify_module, "singular_locus", fail)
    result = classify(build_family("S2").cube)
    assert result.subtype == Subtype.S2
    assert len(result.singular) == 2


def test_classification_is_mobius_invariant(rng):
    D = type_a_cube(1.0, 2.0, 3.0)
    moved = random_mobius(rng).apply_to_net(D)
    assert classify(moved).subtype == Subtype.A1


def test_type_a_degree(cube_a1):
    result = classify(cube_a1, with_degree=True, seed=0)
    assert result.degree == DEGREE_TABLE[Subtype.A1]


def test_degenerate_cube_is_rejected():
    rows = np.tile([0.0, 1.0, 0.0, 0.0], (8, 1))
    w = np.tile([1.0, 0.0, 0.0, 0.0], (8, 1))
    with pytest.raises(DegenerateCube):
        classify(DCCube(rows, w))
