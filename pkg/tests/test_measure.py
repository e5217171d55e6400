import math
from fractions import Fraction

import numpy as np
import pytest

from distspec import measure as M
from distspec.grammar import SpecParseError, parse_measure_spec, realize


def test_sphere_atoms_are_unit_vectors():
    m = M.make_sphere_measure(2, 4, seed=7)
    assert m.n_atoms == 4 and m.ambient_dim == 2
    np.testing.assert_allclose(np.linalg.norm(m.positions, axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(m.weights, 0.25)


def test_zero_sphere_is_plus_minus_one():
    m = M.make_sphere_measure(1, 100, seed=1)
    assert set(np.unique(m.positions)) <= {-1.0, 1.0}


def test_sphere_mean_concentrates():
    # oracle: Monte Carlo concentration, median over 10 seeds
    norms = [np.linalg.norm(M.make_sphere_measure(3, 10_000, seed=s).positions.mean(axis=0)) for s in range(3, 13)]
    assert np.median(norms) <= 0.05


@pytest.mark.parametrize("k,n", [(0, 3), (2, 0), (1.5, 3)])
def test_sphere_rejects_bad_parameters(k, n):
    with pytest.raises(M.MeasureError):
        M.make_sphere_measure(k, n)


def test_cantor_depth_one_and_zero():
    m = M.make_cantor_measure(1 / 3, 1)
    np.testing.assert_allclose(m.positions[:, 0], [0.0, 2 / 3], atol=1e-15)
    np.testing.assert_array_equal(m.weights, [0.5, 0.5])
    m0 = M.make_cantor_measure(1 / 3, 0)
    assert m0.n_atoms == 1 and m0.positions[0, 0] == 0.0 and m0.weights[0] == 1.0


def _exact_left_endpoints(ratio: Fraction, depth: int):
    pts = [Fraction(0)]
    length = Fraction(1)
    for _ in range(depth):
        length_next = length * ratio
        pts = [p + off for p in pts for off in (Fraction(0), length - length_next)]
        length = length_next
    return sorted(pts)


def test_cantor_quarter_depth_ten_matches_exact_enumeration():
    m = M.make_cantor_measure(0.25, 10)
    exact = _exact_left_endpoints(Fraction(1, 4), 10)
    assert m.n_atoms == 1024
    assert np.all((m.positions >= 0) & (m.positions <= 1))
    np.testing.assert_allclose(np.sort(m.positions[:, 0]), [float(p) for p in exact], atol=1e-15)
    gaps = [b - a for a, b in zip(exact, exact[1:])]
    # atoms sit at left endpoints, so neighbouring atoms are one interval
    # length plus the interval gap apart
    interval_gap = Fraction(1, 4) ** 10 * (1 - 2 * Fraction(1, 4)) / Fraction(1, 4)
    assert min(gaps) == Fraction(1, 4) ** 10 + interval_gap
    assert np.diff(np.sort(m.positions[:, 0])).min() == pytest.approx(float(min(gaps)), rel=1e-9)


@pytest.mark.parametrize("ratio,depth", [(0.0, 1), (0.5, 1), (0.3, 25), (0.3, -1)])
def test_cantor_rejects_bad_parameters(ratio, depth):
    with pytest.raises(M.MeasureError):
        M.make_cantor_measure(ratio, depth)


def test_cantor_dimension():
    assert M.cantor_dimension(1 / 3) == pytest.approx(math.log(2) / math.log(3))


def test_uniform_cube():
    m = M.make_uniform_cube(1, 1, seed=0)
    assert m.n_atoms == 1 and 0 <= m.positions[0, 0] <= 1
    m2 = M.make_uniform_cube(2, 1000, seed=5)
    assert np.all((m2.positions >= 0) & (m2.positions <= 1))
    assert 0.49 <= M.make_uniform_cube(1, 100_000, seed=2).positions.mean() <= 0.51


def test_uniform_ball_inside_unit_ball():
    m = M.make_uniform_ball(3, 2000, seed=4)
    assert np.linalg.norm(m.positions, axis=1).max() <= 1.0
    # radial CDF r^3: median radius 2^(-1/3)
    assert np.median(np.linalg.norm(m.positions, axis=1)) == pytest.approx(2 ** (-1 / 3), abs=0.03)


def test_dirac():
    m = M.dirac((0, 0))
    assert m.n_atoms == 1 and np.all(m.positions == 0)
    assert M.dirac((1, 2, 3)).support_radius == pytest.approx(math.sqrt(14), abs=1e-15)
    with pytest.raises(M.MeasureError):
        M.dirac(())


def test_product_measure():
    p = M.product_measure(M.dirac([0]), M.dirac([1]))
    np.testing.assert_array_equal(p.positions, [[0.0, 1.0]])
    a = M.DiscreteMeasure([[0.0], [1.0]], [0.3, 0.7])
    b = M.DiscreteMeasure([[2.0], [5.0]], [0.6, 0.4])
    ab = M.product_measure(a, b)
    assert ab.n_atoms == 4 and ab.weights.sum() == pytest.approx(1.0, abs=1e-12)
    s = M.make_sphere_measure(2, 50, seed=3)
    sp = M.product_measure(s, M.dirac([0, 0]))
    assert sp.ambient_dim == 4
    np.testing.assert_array_equal(sp.positions[:, :2], s.positions)
    np.testing.assert_array_equal(sp.positions[:, 2:], 0.0)
    with pytest.raises(M.BudgetError):
        M.product_measure(s, s, max_atoms=100)


def test_translate():
    t = M.translate(M.make_cantor_measure(1 / 3, 1), [1])
    np.testing.assert_allclose(t.positions[:, 0], [1.0, 5 / 3], atol=1e-15)
    m = M.make_uniform_cube(2, 10, seed=1)
    assert M.translate(m, [0, 0]).same_as(m)
    assert M.translate(M.dirac([0, 0]), [3, 4]).support_radius == 5.0
    with pytest.raises(M.MeasureError):
        M.translate(m, [1, 2, 3])


def test_lift():
    np.testing.assert_array_equal(M.lift(M.dirac([2])).positions, [[2.0, 4.0]])
    two = M.DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
    np.testing.assert_array_equal(M.lift(two).positions, [[0.0, 0.0], [1.0, 1.0]])
    lifted = M.lift(M.make_sphere_measure(3, 100, seed=2))
    np.testing.assert_allclose(lifted.positions[:, -1], 1.0, atol=1e-12)


def test_autocorrelation_examples(two_point):
    a = M.autocorrelation(M.dirac([3.0, -1.0]))
    np.testing.assert_array_equal(a.positions, [[0.0, 0.0]])
    ac = M.autocorrelation(two_point)
    table = dict(zip(ac.positions[:, 0].tolist(), ac.weights.tolist()))
    assert table == {-1.0: 0.25, 0.0: 0.5, 1.0: 0.25}


def test_autocorrelation_of_cantor_is_symmetric():
    m = M.make_cantor_measure(1 / 3, 3)
    ac = M.autocorrelation(m)
    # brute force over the 64 ordered pairs
    brute = {}
    for x, wx in zip(m.positions[:, 0], m.weights):
        for y, wy in zip(m.positions[:, 0], m.weights):
            brute[x - y] = brute.get(x - y, 0.0) + wx * wy
    got = dict(zip(ac.positions[:, 0].tolist(), ac.weights.tolist()))
    assert got.keys() == brute.keys()
    for t, w in got.items():
        assert w == pytest.approx(brute[t], abs=1e-15)
        assert got[-t] == pytest.approx(w, abs=1e-15)


def test_brownian_image_basics():
    img = M.brownian_image(M.dirac([0.0]), 2, seed=3)
    np.testing.assert_array_equal(img.positions, [[0.0, 0.0]])
    with pytest.raises(M.MeasureError):
        M.brownian_image(M.dirac([1.5]), 2)
    with pytest.raises(M.MeasureError):
        M.brownian_image(M.dirac([0.0, 0.0]), 2)


def test_brownian_unit_increment_has_second_moment_d():
    two = M.DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5])
    sq = []
    for s in range(10_000):
        p = M.brownian_image(two, 2, seed=s).positions
        sq.append(float(((p[1] - p[0]) ** 2).sum()))
    assert np.mean(sq) == pytest.approx(2.0, rel=0.05)


def test_brownian_increment_variance_matches_time_gaps():
    base = M.make_cantor_measure(1 / 9, 8)
    t = np.sort(base.positions[:, 0])
    gaps = np.diff(t)
    z = []
    for s in range(200):
        img = M.brownian_image(base, 2, seed=s)
        order = np.argsort(base.positions[:, 0], kind="stable")
        inc = np.diff(img.positions[order], axis=0)
        z.append(inc / np.sqrt(gaps)[:, None])
    z = np.concatenate(z).ravel()
    assert img.n_atoms == 256
    assert z.var() == pytest.approx(1.0, abs=0.02)


def test_random_translate_cantor():
    assert M.make_random_translate_cantor(0.25, 0, seed=5).n_atoms == 1
    m = M.make_random_translate_cantor(0.25, 8, seed=1)
    x = np.sort(m.positions[:, 0])
    assert m.n_atoms == 256 and x.min() >= 0 and x.max() <= 1
    assert np.diff(x).min() > 0


def test_random_translate_cantor_decays_at_least_as_fast():
    from distspec.spectrum import estimate_fourier_dim

    det, _ = estimate_fourier_dim(M.make_cantor_measure(0.25, 8))
    rnd = [estimate_fourier_dim(M.make_random_translate_cantor(0.25, 8, s))[0] for s in range(10)]
    assert np.median(rnd) >= det
    # the deterministic measure has no sup decay at all; some random draws do
    assert det == 0.0 and max(rnd) > 0.2


def test_reproducible_bit_patterns():
    for make in (lambda s: M.make_sphere_measure(3, 50, s), lambda s: M.make_uniform_cube(2, 50, s),
                 lambda s: M.make_random_translate_cantor(0.3, 5, s), lambda s: M.make_uniform_ball(2, 50, seed=s)):
        assert make(11).same_as(make(11))
        assert not make(11).same_as(make(12))


def test_invariant_violations_rejected():
    with pytest.raises(M.MeasureError):
        M.DiscreteMeasure([[0.0], [1.0]], [0.5, 0.6])
    with pytest.raises(M.MeasureError):
        M.DiscreteMeasure([[np.nan]], [1.0])
    with pytest.raises(M.MeasureError):
        M.DiscreteMeasure(np.zeros((0, 2)), [])


def test_csv_round_trip():
    m = M.make_sphere_measure(3, 20, seed=9)
    text = m.to_csv()
    assert text.splitlines()[0] == "x1,x2,x3,weight"
    back = M.DiscreteMeasure.from_csv(text)
    assert back.same_as(m)


# ------------------------------------------------------------------ grammar


def test_grammar_examples():
    assert realize("dirac(0,0)").n_atoms == 1
    p = realize("product(sphere(k=2,n=8),dirac(0))")
    assert p.n_atoms == 8 and p.ambient_dim == 3
    t = realize("translate(cantor(ratio=0.333333,depth=2),1)")
    assert t.n_atoms == 4 and np.all((t.positions >= 1) & (t.positions <= 2))


def test_grammar_whitespace_and_nesting():
    a = realize(" lift( autocorr( cantor( ratio = 0.25 , depth = 2 ) ) ) ")
    assert a.ambient_dim == 2
    b = realize("brownian(cantor(ratio=0.1,depth=3),d=3)", seed=4)
    assert b.ambient_dim == 3 and b.n_atoms == 8


def test_grammar_seeds_are_reproducible_and_position_dependent():
    spec = "product(sphere(k=2,n=5),sphere(k=2,n=5))"
    m1, m2 = realize(spec, seed=3), realize(spec, seed=3)
    assert m1.same_as(m2)
    # the two leaves draw from different streams
    assert not np.array_equal(m1.positions[:5, :2], m1.positions[::5, 2:])


@pytest.mark.parametrize("text,pos", [("bogus(1)", 0), ("sphere(k=2)", 10), ("dirac(0,", 8), ("sphere(k=2,n=3)x", 15)])
def test_grammar_errors_carry_position(text, pos):
    with pytest.raises(SpecParseError) as exc:
        parse_measure_spec(text)
    assert exc.value.position == pos


def test_grammar_budget():
    with pytest.raises(M.BudgetError):
        realize("product(sphere(k=2,n=100),sphere(k=2,n=100))", max_atoms=1000)
