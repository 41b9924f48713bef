import numpy as np
import pytest
from fractions import Fraction

from linkforge.polymap import (
    ConstantTermError,
    ParseError,
    Poly,
    PolyMap,
    PolyMapError,
    Substitution,
    UnknownVariableError,
    brieskorn,
    catalog_names,
    get_germ,
    iter_catalog,
    parse_polymap,
)

RNG = np.random.default_rng(20240811)


def random_poly(rng, nvars, max_terms=6, max_deg=3):
    terms = {}
    for _ in range(rng.integers(1, max_terms + 1)):
        e = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=nvars))
        terms[e] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
    return Poly(nvars, terms)


# ---------------------------------------------------------------- parsing

def test_parse_identity_like_germ():
    pm = parse_polymap("x1 ; x2", nvars=4)
    assert pm.nvars == 4
    assert pm.components[0] == Poly.variable(4, 1)
    assert pm.components[1] == Poly.variable(4, 2)


def test_parse_rudolph_f_complex_mode():
    pm = parse_polymap("z2^3 - 3*(x1^2+x2^2)*(1+i*x2)*z2 - 2*x1",
                       mode="complex")
    # z2 = x3 + i*x4; direct hand expansion of the real part:
    x = [Poly.variable(4, i) for i in range(1, 5)]
    s12 = x[0] * x[0] + x[1] * x[1]
    f1 = (x[2] ** 3 - (x[2] * x[3] * x[3]).scale(3)
          - s12.scale(3) * x[2] + s12.scale(3) * x[1] * x[3]
          - x[0].scale(2))
    f2 = ((x[2] * x[2] * x[3]).scale(3) - x[3] ** 3
          - s12.scale(3) * x[3] - s12.scale(3) * x[1] * x[2])
    assert pm.components[0] == f1
    assert pm.components[1] == f2


def test_parse_constant_term_rejected():
    with pytest.raises(ConstantTermError):
        parse_polymap("x1 + 1 ; x2", nvars=4)


def test_parse_syntax_error_position():
    with pytest.raises(ParseError) as err:
        parse_polymap("x1 + * x2 ; x2", nvars=4)
    assert err.value.position >= 4


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariableError):
        parse_polymap("x9 ; x2", nvars=4)
    with pytest.raises(PolyMapError):
        parse_polymap("y1 ; x2", nvars=4)


def test_parse_complex_only_tokens_rejected_in_real_mode():
    for src in ("i*x1 ; x2", "z1 ; x2", "conj(x1) ; x2"):
        with pytest.raises(PolyMapError):
            parse_polymap(src, nvars=4)


def test_parse_conj_re_im():
    pm = parse_polymap("z1*conj(z1)", mode="complex")
    x = [Poly.variable(4, i) for i in range(1, 5)]
    assert pm.components[0] == x[0] * x[0] + x[1] * x[1]
    assert pm.components[1].is_zero()
    pm2 = parse_polymap("Im(z2) + i*Re(z1)", mode="complex")
    assert pm2.components[0] == x[3]
    assert pm2.components[1] == x[0]


def test_parse_rationals_exact():
    pm = parse_polymap("3/2*x1 + 0.25*x2 ; x2", nvars=4)
    assert pm.components[0].terms[(1, 0, 0, 0)] == Fraction(3, 2)
    assert pm.components[0].terms[(0, 1, 0, 0)] == Fraction(1, 4)


def test_parser_round_trip_on_random_polys():
    for _ in range(50):
        p = random_poly(RNG, 4)
        q = random_poly(RNG, 4)
        # force germ: strip constants
        p = p - Poly.constant(4, p.constant_term())
        q = q - Poly.constant(4, q.constant_term())
        if p.is_zero() and q.is_zero():
            continue
        pm = PolyMap(4, (p, q))
        again = parse_polymap(pm.to_source(), nvars=4)
        assert again.components == pm.components


def test_parser_round_trip_catalog():
    for pm in iter_catalog():
        again = parse_polymap(pm.to_source(), nvars=pm.nvars)
        assert again.components == pm.components


# ---------------------------------------------------------------- evaluate

def test_evaluate_at_origin_is_zero_for_catalog():
    for pm in iter_catalog():
        assert pm.evaluate([0.0] * pm.nvars) == (0.0, 0.0)


def test_rudolph_f_at_unit_x1():
    rf = get_germ("rudolph_f")
    assert rf.evaluate_fraction([1, 0, 0, 0]) == (Fraction(-2), Fraction(0))
    assert rf.evaluate([1.0, 0.0, 0.0, 0.0]) == (-2.0, 0.0)


def test_trivial_plane_is_projection():
    tp = get_germ("trivial_plane")
    assert tp.evaluate([0.3, -0.4, 0.5, 0.7]) == (0.3, -0.4)


def test_evaluate_dimension_mismatch():
    tp = get_germ("trivial_plane")
    with pytest.raises(PolyMapError):
        tp.evaluate([0.1, 0.2])


def test_evaluate_many_matches_scalar():
    rg = get_germ("rudolph_g")
    pts = RNG.normal(size=(40, 4)) * 0.3
    vals = rg.evaluate_many(pts)
    for k in range(len(pts)):
        f = rg.evaluate(pts[k])
        assert np.allclose(vals[k], f, rtol=0, atol=1e-15)


# ---------------------------------------------------------------- jacobian

def fd_jacobian(pm, x, h=1e-5):
    x = np.asarray(x, dtype=float)
    J = np.zeros((2, pm.nvars))
    for j in range(pm.nvars):
        e = np.zeros(pm.nvars)
        e[j] = h
        fp = np.array(pm.evaluate(x + e))
        fm = np.array(pm.evaluate(x - e))
        J[:, j] = (fp - fm) / (2 * h)
    return J


def test_trivial_plane_jacobian_constant():
    tp = get_germ("trivial_plane")
    J = tp.jacobian([0.3, 0.1, -0.2, 0.9])
    assert np.array_equal(J, np.array([[1, 0, 0, 0], [0, 1, 0, 0]],
                                      dtype=float))


def test_suspension_z_block_r2():
    tp = get_germ("trivial_plane")
    F = tp.suspend(2)
    a, b = 0.7, -0.3
    J = F.jacobian([0.0, 0.0, 0.0, 0.0, a, b])
    zblock = J[:, 4:]
    assert np.allclose(zblock, [[2 * a, -2 * b], [2 * b, 2 * a]], atol=1e-15)


def test_jacobian_matches_finite_differences():
    for pm in iter_catalog():
        pts = RNG.normal(size=(100, pm.nvars)) * 0.5
        for x in pts:
            J = pm.jacobian(x)
            Jfd = fd_jacobian(pm, x)
            scale = max(1.0, np.abs(J).max())
            assert np.abs(J - Jfd).max() / scale < 1e-6


def test_jacobian_many_matches_scalar():
    b = brieskorn(2, 3)
    pts = RNG.normal(size=(25, 4)) * 0.2
    Js = b.jacobian_many(pts)
    for k in range(len(pts)):
        assert np.allclose(Js[k], b.jacobian(pts[k]), atol=1e-15)


# ---------------------------------------------------------------- substitute

def test_identity_substitution():
    for pm in iter_catalog():
        sub = Substitution.identity(pm.nvars)
        assert pm.substitute(sub).components == pm.components


def test_rudolph_g_from_f_by_squaring_z1():
    rf = get_germ("rudolph_f")
    x = [Poly.variable(4, i) for i in range(1, 5)]
    sub = Substitution((x[0] * x[0] - x[1] * x[1], (x[0] * x[1]).scale(2),
                        x[2], x[3]))
    assert rf.substitute(sub).components == get_germ("rudolph_g").components


def test_perron_g_from_f_by_squaring_z2():
    pf = get_germ("perron_f")
    x = [Poly.variable(4, i) for i in range(1, 5)]
    sub = Substitution((x[0], x[1], x[2] * x[2] - x[3] * x[3],
                        (x[2] * x[3]).scale(2)))
    assert pf.substitute(sub).components == get_germ("perron_g").components


def test_substitution_evaluation_compatibility():
    # evaluate(substitute(f, s), x) == evaluate(f, s(x)) exactly and in float
    for trial in range(25):
        f = PolyMap(3, tuple(
            c - Poly.constant(3, c.constant_term())
            for c in (random_poly(RNG, 3), random_poly(RNG, 3))))
        # origin-preserving targets keep the composite a germ
        targets = tuple(
            t - Poly.constant(2, t.constant_term())
            for t in (random_poly(RNG, 2, max_terms=3, max_deg=2)
                      for _ in range(3)))
        sub = Substitution(targets)
        g = f.substitute(sub)
        for _ in range(40):
            x = [Fraction(int(RNG.integers(-4, 5)), int(RNG.integers(1, 4)))
                 for _ in range(2)]
            sx = [t.eval_fraction(x) for t in targets]
            assert g.evaluate_fraction(x) == f.evaluate_fraction(sx)
            xf = [float(v) for v in x]
            sxf = [t.eval_float(xf) for t in targets]
            lhs = np.array(g.evaluate(xf))
            rhs = np.array(f.evaluate(sxf))
            # relative to the term-magnitude sum (cancellation-aware)
            scale = max(1.0, *(
                sum(abs(float(c)) * np.prod(np.abs(xf) ** np.array(e))
                    for e, c in comp.terms.items())
                for comp in g.components))
            assert np.abs(lhs - rhs).max() / scale < 1e-12


# ---------------------------------------------------------------- suspend

def test_suspend_slice_identity():
    for pm in iter_catalog():
        for r in range(2, 7):
            F = pm.suspend(r)
            for _ in range(10):
                x = RNG.normal(size=pm.nvars) * 0.4
                xz = np.concatenate([x, [0.0, 0.0]])
                assert F.evaluate(xz) == pm.evaluate(x)


def test_suspend_trivial_r2_components():
    tp = get_germ("trivial_plane")
    F = tp.suspend(2)
    x = [Poly.variable(6, i) for i in range(1, 7)]
    assert F.components[0] == x[0] + x[4] * x[4] - x[5] * x[5]
    assert F.components[1] == x[1] + (x[4] * x[5]).scale(2)


def test_suspend_matches_complex_power():
    rg = get_germ("rudolph_g")
    for r in (2, 3, 5):
        F = rg.suspend(r)
        for _ in range(20):
            x = RNG.normal(size=4) * 0.3
            z = complex(*RNG.normal(size=2))
            pt = np.concatenate([x, [z.real, z.imag]])
            expect = complex(*rg.evaluate(x)) + z ** r
            got = complex(*F.evaluate(pt))
            assert abs(got - expect) < 1e-10 * max(1.0, abs(expect))


def test_suspend_rejects_small_r():
    with pytest.raises(PolyMapError):
        get_germ("trivial_plane").suspend(1)


# ---------------------------------------------------------------- catalog

def test_catalog_names_and_lookup():
    names = catalog_names()
    for required in ("rudolph_f", "rudolph_g", "perron_f", "perron_g",
                     "trivial_plane", "rudolph_f_alt", "perron_f_alt"):
        assert required in names
    assert get_germ("brieskorn(2,3)").name == "brieskorn(2,3)"
    with pytest.raises(PolyMapError):
        get_germ("missing_germ")


def test_brieskorn_23_components():
    b = brieskorn(2, 3)
    x = [Poly.variable(4, i) for i in range(1, 5)]
    re = x[0] * x[0] - x[1] * x[1] + x[2] ** 3 - (x[2] * x[3] * x[3]).scale(3)
    im = (x[0] * x[1]).scale(2) + (x[2] * x[2] * x[3]).scale(3) - x[3] ** 3
    assert b.components[0] == re
    assert b.components[1] == im
