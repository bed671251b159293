"""Standard small fixtures used across the test and acceptance suites.

All builders are deterministic and parametrized by the ground field.
"""

from __future__ import annotations

from .dgcat import DgCategory, DgFunctor, MorInfo, free_dg_category, identity_functor


def ground_field_category(field, name="k"):
    """The one-object category with endomorphisms the ground field."""
    return DgCategory(field, ["*"], [MorInfo("1", "*", "*", 0, True)],
                      {"*": "1"}, {}, {}, name=name)


def dual_numbers(field, name="kx2"):
    """k[x]/x^2, basis {1, x} in degree 0, x.x = 0."""
    mors = [MorInfo("1", "*", "*", 0, True), MorInfo("x", "*", "*", 0)]
    compose = {("x", "x"): {}}
    return DgCategory(field, ["*"], mors, {"*": "1"}, compose, {}, name=name)


def upper_triangular2(field, name="ut2"):
    """The 2x2 upper triangular matrix algebra, basis {1, e, n}.

    e = E11 idempotent, n = E12 nilpotent: e.e = e, e.n = n, n.e = 0, n.n = 0.
    """
    mors = [MorInfo("1", "*", "*", 0, True), MorInfo("e", "*", "*", 0),
            MorInfo("n", "*", "*", 0)]
    compose = {
        ("e", "e"): {"e": 1},
        ("e", "n"): {"n": 1},
        ("n", "e"): {},
        ("n", "n"): {},
    }
    return DgCategory(field, ["*"], mors, {"*": "1"}, compose, {}, name=name)


def arrow_category(field, name="pq"):
    """Two objects p, q and a single arrow a: p -> q (the A2 quiver)."""
    return free_dg_category(field, ["p", "q"], [("a", "p", "q", 0)], 1, name=name)


def free_loops(field, bound=2, name="loops"):
    """One object, loops f (degree 0) and h with d h = f.

    Differentials raise degree by 1 here, so the bounding loop h lives in
    degree -1 (homological degree 1).
    """
    return free_dg_category(field, ["*"], [("f", "*", "*", 0), ("h", "*", "*", -1)],
                            bound, {"h": {("f",): 1}}, name=name)


def free_loop_graded(field, label="g", degree=1, bound=2, name="gloop"):
    """One object, a single loop of the given degree, zero differential."""
    return free_dg_category(field, ["*"], [(label, "*", "*", degree)], bound,
                            name=name)


def zero_functor_on_dual_numbers(field):
    """The endofunctor of k[x]/x^2 sending x to 0."""
    A = dual_numbers(field)
    return A, DgFunctor(A, A, {"*": "*"}, {"1": {"1": field.one}, "x": {}},
                        name="x->0")


def nonassociative_table(field):
    """A deliberately broken structure-constant table for validator tests.

    Basis {1, u, v} with u.u = v, u.v = u, v.u = 0, v.v = 0: then
    (u.u).u = v.u = 0 while u.(u.u) = u.v = u, so associativity fails.
    """
    mors = [MorInfo("1", "*", "*", 0, True), MorInfo("u", "*", "*", 0),
            MorInfo("v", "*", "*", 0)]
    compose = {
        ("u", "u"): {"v": 1},
        ("u", "v"): {"u": 1},
        ("v", "u"): {},
        ("v", "v"): {},
    }
    return DgCategory(field, ["*"], mors, {"*": "1"}, compose, {},
                      name="broken", check=False)


def standard_fixture_categories(field):
    """The fixture list used by differential-soundness sweeps."""
    return [
        ground_field_category(field),
        dual_numbers(field),
        upper_triangular2(field),
        arrow_category(field),
        free_loops(field, bound=2),
    ]


def identity_on(cat):
    return identity_functor(cat)
