import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import EX4, curve
from singcurve.curves import curve_from_branches, load_curve, parse_parametrization as PP
from singcurve.errors import CommonBranch, PrecisionExhausted
from singcurve.fuzz import random_branch, random_curve
from singcurve.numerics import PowerSeries
from singcurve.resolution import (
    INF,
    blow_down,
    classify_point,
    resolve,
    resolve_at,
    root_state,
    tangency_at,
    transform_branch,
)


def one(text):
    return curve_from_branches([PP(text)])


def test_transform_cusp():
    pos, st_ = transform_branch(root_state(PP("x(t)=t^3; y(t)=t^2")))
    assert pos is INF
    assert (st_.u, st_.v) == (PowerSeries({1: 1}), PowerSeries({2: 1}))
    assert st_.level == 1 and st_.comp_v == 1 and st_.comp_u is None


def test_transform_smooth_slope():
    pos, _ = transform_branch(root_state(PP("x(t)=t; y(t)=-3/2*t + t^4")))
    assert pos == PowerSeries({0: 1}).coefficient(0) * -3 / 2


def test_transform_2_5():
    st_ = root_state(PP("x(t)=t^2; y(t)=t^5"))
    _, st_ = transform_branch(st_)
    assert (st_.u, st_.v) == (PowerSeries({2: 1}), PowerSeries({3: 1}))
    _, st_ = transform_branch(st_)
    assert (st_.u, st_.v) == (PowerSeries({2: 1}), PowerSeries({1: 1}))
    assert st_.multiplicity() == 1
    assert st_.tangent_component() == 2


def test_cusp_cluster():
    c = resolve(one("x(t)=t^3; y(t)=t^2"))
    assert [p.id for p in c.chain("b1")] == ["O", "O/inf", "O/inf/0", "O/inf/0/1"]
    assert c.multiplicity_sequence("b1") == (2, 1, 1, 1)
    assert classify_point(c, "O") == "free"
    assert classify_point(c, "O/inf") == "free"
    assert classify_point(c, "O/inf/0") == "satellite"
    assert tangency_at(c, "O/inf", "b1") == "last_pasted"
    assert tangency_at(c, "O/inf/0/1", "b1") == "none"
    assert c.proximity_violations() == []


def test_tangency_2_5():
    c = resolve(one("x(t)=t^5; y(t)=t^2"))
    assert tangency_at(c, "O/inf", "b1") == "none"


def test_transversal_lines():
    c = resolve(curve_from_branches([PP("x(t)=t; y(t)=0"), PP("x(t)=0; y(t)=t")]))
    assert c.total_multiplicity("O") == 2
    assert len(c.children("O")) == 2
    assert c.maximal_point("b1").level == 1 and c.maximal_point("b2").level == 1


def test_example4_shared_points():
    c = resolve(curve(EX4))
    shared = [p for p in c.points.values() if len(p.branches_through) == 2]
    assert [p.id for p in sorted(shared, key=lambda p: p.level)] == [
        "O", "O/inf", "O/inf/0", "O/inf/0/1", "O/inf/0/1/0"]
    b1, b2 = sorted(c.branch_ids)
    prods = [c.branch_multiplicity(p.id, b1) * c.branch_multiplicity(p.id, b2)
             for p in sorted(shared, key=lambda p: p.level)]
    assert prods == [4, 1, 1, 1, 1]
    assert c.proximity_violations() == []


def test_identical_branches_rejected():
    with pytest.raises(CommonBranch):
        resolve(curve_from_branches([PP("x(t)=t^3; y(t)=t^2"), PP("x(t)=t^3; y(t)=t^2").with_id("b2")]))


def test_reparametrized_branch_rejected():
    a = PP("x(t)=t^3; y(t)=t^2")
    b = PP("x(t)=-t^3; y(t)=t^2").with_id("b2")
    with pytest.raises(CommonBranch):
        resolve(curve_from_branches([a, b]))


def test_precision_cap():
    spec = load_curve({"polynomial": EX4, "truncation": 4})
    with pytest.raises(PrecisionExhausted):
        resolve(spec, 4, 8)
    assert resolve(spec, 4, 16).truncation == 8


def test_precision_cap_from_env(monkeypatch):
    monkeypatch.setenv("SINGCURVE_MAX_TRUNCATION", "8")
    with pytest.raises(PrecisionExhausted):
        resolve(load_curve({"polynomial": EX4, "truncation": 4}))


def test_stability_between_T_and_2T():
    spec = curve(EX4, 16)
    c = resolve(spec)
    T = c.truncation
    again = resolve_at([spec.branch_at(i, 2 * T) for i in range(len(spec.branches))], 2 * T)
    assert c.same_as(again)


def _check_cluster(c):
    assert c.proximity_violations() == []
    for bid in c.branch_ids:
        chain = c.chain(bid)
        seq = c.multiplicity_sequence(bid)
        assert list(seq) == sorted(seq, reverse=True) and seq[-1] == 1
        for a, b in zip(chain, chain[1:]):
            assert b.parent == a.id
        m = c.maximal_point(bid)
        assert len(m.components_through) == 1
    for p in c.points.values():
        if p.parent is None:
            assert p.level == 0 and not p.components_through
        else:
            assert 1 <= len(p.components_through) <= 2
            assert p.created_component - 1 == p.level - 1 or p.level in p.components_through
        kids = c.children(p.id)
        assert len({k.position for k in kids}) == len(kids)
        # one child per distinct tangent direction of the transforms
        dirs = {c.chain(b)[p.level + 1].position for b in p.branches_through
                if len(c.chain(b)) > p.level + 1}
        assert len(dirs) == len(kids)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_random_clusters_are_well_formed(seed):
    _check_cluster(resolve(random_curve(random.Random(seed))))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_blow_down_inverts_resolution(seed):
    b = random_branch(random.Random(seed))
    st_ = root_state(b)
    path = []
    for _ in range(6):
        pos, st_ = transform_branch(st_, 40)
        path.append(pos)
        x, y = blow_down(path, st_.u, st_.v)
        assert x.agrees_with(b.x) and y.agrees_with(b.y)
        assert min(x.prec or 99, y.prec or 99) >= 40 - 6 * 9


def test_rational_positions_do_not_collide_with_paths():
    # slope -1/2 at the first step must not be named like the path (-1, 2)
    spec = curve_from_branches([
        PP("x(t)=2*t^2+2*t^4-1/2*t^6-t^8+2*t^9; y(t)=-t^2-t^4+t^6+2*t^8-4*t^9"),
        PP("x(t)=-t^2-2*t^4+t^9; y(t)=t^2+4*t^4-t^9"),
    ])
    c = resolve(spec)
    for p in c.points.values():
        if p.parent is not None:
            assert c.points[p.parent].level == p.level - 1
    assert "O/(-1/2)" in c.points
    assert len({p.id for p in c.points.values()}) == len(c.points)
