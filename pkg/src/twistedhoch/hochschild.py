"""The reduced Hochschild complex of a dg category with bimodule
coefficients, its truncated total complex, cohomology with exactness
certificates, the coherence-equation checker, and the coherent internal
Hom category with its convolution composition.

Representation.  A cochain of total degree T has one multilinear component
per arity; the arity-n component assigns to every composable tuple of
non-unit basis morphisms (a_1, ..., a_n), written in path order (a_1 first
along the path), a value in M(source a_1, target a_n) of degree
T - n + sum |a_i|.  Tuples containing designated units carry no data: the
complex is reduced by construction.

Signs.  All formulas are Koszul formulas for the bar weights
||a|| = |a| - 1 of the arguments and the shifted total degree w = T - 1 of
a cochain; see docs/sign_conventions.md.  The total differential is
bracketing with the Maurer-Cartan cochain mu + d, where mu(a, b) is the
multiplication twisted by (-1)^|a| and d carries (-1)^|a|; written out on
(a_1, ..., a_{n+1}), with p_i = sum_{q<i} ||a_q||:

      (-1)^|P(a_1..a_n)| d_M(P(a_1..a_n))
    - sum_i (-1)^(w + p_i + |a_i|)  P(a_1, .., d a_i, .., a_n)
    - sum_i (-1)^(w + p_i + |a_i|)  P(.., a_{i+1} . a_i, ..)
    + (-1)^|P(a_1..a_n)|            a_{n+1} . P(a_1, ..., a_n)
    + (-1)^(w ||a_1|| + |a_1|)      P(a_2, ..., a_{n+1}) . a_1

The degree-0 closedness equations specialize at arity 1 to naturality up to
an exact term, and the arity-0 kernel in degree 0 is the center.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import elem_add, elem_scale
from .dgcat import DgBimodule, DgCategory, DgFunctor, bimodule_from_functors, identity_functor
from .linalg import SparseMatrix, extend_basis, rank_kernel_image
from .reports import ValidationReport


class WindowNotExactError(Exception):
    """A cohomology request outside the certified truncation window."""


class WindowOverflowError(Exception):
    """A differential produced an in-window component beyond the arity cap."""


@dataclass(frozen=True)
class TruncationWindow:
    """Arity cap and total-degree window for the truncated total complex."""

    l_max: int
    degree_min: int
    degree_max: int

    def __post_init__(self):
        if self.l_max < 0 or self.degree_min > self.degree_max:
            raise ValueError("malformed truncation window")


def _ray(coeff, bound, want_le):
    """Integer solution set of coeff*l <= bound (or >=), as (lo, hi) rays.

    Returns (lo, hi) with None for an unbounded end, or "empty"/"all".
    """
    if coeff == 0:
        return "all" if (0 <= bound if want_le else 0 >= bound) else "empty"
    q = Fraction(bound, coeff)
    if want_le:
        if coeff > 0:
            import math
            return (None, math.floor(q))
        import math
        return (math.ceil(q), None)
    if coeff > 0:
        import math
        return (math.ceil(q), None)
    import math
    return (None, math.floor(q))


def window_exactness(cat: DgCategory, bimod: DgBimodule, w: TruncationWindow):
    """Decide by degree-bound arithmetic whether every total degree in the
    window receives contributions only from arities <= l_max.

    An arity-l elementary cochain has total degree in
    [l(1-bD)+aM, l(1-aD)+bM] where [aD,bD] bound the non-unit morphism
    degrees and [aM,bM] the coefficient degrees.  Returns (flag, certificate
    dict with the numbers used).
    """
    cert = {"l_max": w.l_max, "degree_min": w.degree_min, "degree_max": w.degree_max}
    dbounds = cat.nonunit_degree_bounds()
    mbounds = bimod.degree_bounds()
    if dbounds is None or mbounds is None:
        cert["reason"] = "no non-unit morphisms or empty coefficients"
        return True, cert
    aD, bD = dbounds
    aM, bM = mbounds
    cert.update({"arg_degree_min": aD, "arg_degree_max": bD,
                 "coeff_degree_min": aM, "coeff_degree_max": bM})
    # need: no integer l >= l_max+1 with l(1-bD) <= dmax-aM and l(1-aD) >= dmin-bM
    lo_set = _ray(1 - bD, w.degree_max - aM, want_le=True)
    hi_set = _ray(1 - aD, w.degree_min - bM, want_le=False)
    lo, hi = w.l_max + 1, None
    for s in (lo_set, hi_set):
        if s == "empty":
            cert["reason"] = "arity interval misses the window for every arity"
            return True, cert
        if s == "all":
            continue
        slo, shi = s
        if slo is not None:
            lo = max(lo, slo)
        if shi is not None:
            hi = shi if hi is None else min(hi, shi)
    empty = hi is not None and lo > hi
    cert["offending_arities"] = None if empty else f"l >= {lo}" if hi is None else f"{lo}..{hi}"
    cert["reason"] = ("no arity beyond l_max reaches the window" if empty
                      else "arities beyond l_max can contribute in the window")
    return empty, cert


class HochCochain:
    """An element of the (truncated) total Hochschild complex.

    parts maps (obj0, tuple-of-labels) -> {value label: scalar}; obj0 is the
    source object of the tuple (carried explicitly so arity-0 components are
    keyed per object).
    """

    def __init__(self, ctx: "HochComplex", total_degree: int, parts=None):
        self.ctx = ctx
        self.total_degree = total_degree
        self.parts = {}
        f = ctx.field
        for key, val in (parts or {}).items():
            clean = {m: f.of(c) for m, c in val.items() if not f.is_zero(f.of(c))}
            if clean:
                self.parts[key] = clean

    def copy(self):
        return HochCochain(self.ctx, self.total_degree,
                           {k: dict(v) for k, v in self.parts.items()})

    def is_zero(self):
        return not self.parts

    def component(self, key):
        return dict(self.parts.get(key, {}))

    def arities(self):
        return sorted({len(k[1]) for k in self.parts})

    def max_arity(self):
        return max((len(k[1]) for k in self.parts), default=0)

    def add_into(self, key, elem, scalar=None):
        f = self.ctx.field
        if scalar is not None:
            elem = elem_scale(f, scalar, elem)
        if not elem:
            return
        acc = elem_add(f, self.parts.get(key, {}), elem)
        if acc:
            self.parts[key] = acc
        else:
            self.parts.pop(key, None)

    def plus(self, other, scalar=None):
        if other.total_degree != self.total_degree:
            raise ValueError("cannot add cochains of different total degree")
        out = self.copy()
        for key, val in other.parts.items():
            out.add_into(key, val, scalar)
        return out

    def scaled(self, c):
        f = self.ctx.field
        return HochCochain(self.ctx, self.total_degree,
                           {k: elem_scale(f, c, v) for k, v in self.parts.items()})

    def __eq__(self, other):
        return (isinstance(other, HochCochain) and other.total_degree == self.total_degree
                and other.parts == self.parts)

    def restrict_to_window(self):
        """Drop components beyond the arity cap (they are flagged upstream)."""
        kept = {k: v for k, v in self.parts.items() if len(k[1]) <= self.ctx.window.l_max}
        return HochCochain(self.ctx, self.total_degree, kept)

    def sort_key(self):
        return sorted((k[0], k[1], tuple(sorted(v))) for k, v in self.parts.items())


class HochComplex:
    """The (reduced or unnormalized) Hochschild total complex, truncated.

    Provides basis enumeration per total degree, the total differential,
    cohomology with window certification, and elementary cochains.
    """

    def __init__(self, cat: DgCategory, bimod: DgBimodule, window: TruncationWindow,
                 reduced=True):
        if bimod.cat is not cat:
            raise ValueError("bimodule is not over the given category")
        self.cat = cat
        self.bimod = bimod
        self.window = window
        self.reduced = reduced
        self.field = cat.field
        self._tuples = {}
        self._basis = {}
        self._exact = None
        self._d_preimages = None
        self._splittings = None
        self._by_source = None
        self._by_target = None

    # -- certificates ------------------------------------------------------
    def exactness(self):
        if self._exact is None:
            self._exact = window_exactness(self.cat, self.bimod, self.window)
        return self._exact

    @property
    def exactness_flag(self):
        return self.exactness()[0]

    # -- bases ---------------------------------------------------------
    def _labels(self):
        if self.reduced:
            return self.cat.nonunit_basis()
        return sorted(self.cat.mor)

    def tuples(self, arity):
        """All composable tuples of admissible basis morphisms, path order."""
        if arity in self._tuples:
            return self._tuples[arity]
        cat = self.cat
        if arity == 0:
            out = [(obj, ()) for obj in sorted(cat.objects)]
        else:
            labels = self._labels()
            out = []

            def grow(prefix, cursor):
                if len(prefix) == arity:
                    out.append((cat.source(prefix[0]), tuple(prefix)))
                    return
                for l in labels:
                    if cat.source(l) == cursor:
                        grow(prefix + [l], cat.target(l))

            for l in labels:
                grow([l], cat.target(l))
        out.sort()
        self._tuples[arity] = out
        return out

    def tuple_end(self, key):
        obj0, labels = key
        return self.cat.target(labels[-1]) if labels else obj0

    def basis(self, total_degree):
        """Elementary cochain keys (obj0, labels, value label) at this degree."""
        if total_degree in self._basis:
            return self._basis[total_degree]
        out = []
        for arity in range(self.window.l_max + 1):
            for obj0, labels in self.tuples(arity):
                end = self.cat.target(labels[-1]) if labels else obj0
                want = total_degree - arity + sum(self.cat.degree(a) for a in labels)
                for m in self.bimod.basis(obj0, end):
                    if self.bimod.degree(m) == want:
                        out.append((obj0, labels, m))
        out.sort(key=lambda k: (len(k[1]), k[0], k[1], k[2]))
        self._basis[total_degree] = out
        return out

    def elementary(self, key, total_degree=None):
        obj0, labels, m = key
        if total_degree is None:
            total_degree = (len(labels) + self.bimod.degree(m)
                            - sum(self.cat.degree(a) for a in labels))
        return HochCochain(self, total_degree, {(obj0, labels): {m: self.field.one}})

    def zero(self, total_degree):
        return HochCochain(self, total_degree)

    # -- reverse structure tables ---------------------------------------
    def _build_tables(self):
        cat = self.cat
        labels = self._labels()
        self._d_preimages = {}
        for a in labels:
            for b, c in cat.diff.get(a, {}).items():
                self._d_preimages.setdefault(b, []).append((a, c))
        self._splittings = {}
        for a in labels:
            for b in labels:
                if cat.source(b) != cat.target(a):
                    continue
                for m, c in cat.compose_labels(b, a).items():
                    self._splittings.setdefault(m, []).append((a, b, c))
        self._by_source = {}
        self._by_target = {}
        for a in labels:
            self._by_source.setdefault(cat.source(a), []).append(a)
            self._by_target.setdefault(cat.target(a), []).append(a)

    def _tables(self):
        if self._d_preimages is None:
            self._build_tables()
        return self._d_preimages, self._splittings, self._by_source, self._by_target

    # -- the total differential ------------------------------------------
    def differential_raw(self, psi: HochCochain) -> HochCochain:
        """The full total differential, no arity truncation."""
        cat, bm, f = self.cat, self.bimod, self.field
        T = psi.total_degree
        w = T - 1
        d_pre, splits, by_src, by_tgt = self._tables()
        out = HochCochain(self, T + 1)
        for (obj0, K), V in psi.parts.items():
            n = len(K)
            prefix = [0] * (n + 1)
            for i in range(n):
                prefix[i + 1] = prefix[i] + cat.degree(K[i]) - 1
            end = cat.target(K[-1]) if K else obj0
            vdeg = T - n + sum(cat.degree(a) for a in K)
            vsign = f.of(-1 if vdeg % 2 else 1)

            out.add_into((obj0, K), bm.d(V), vsign)

            for i in range(n):
                for a, c in d_pre.get(K[i], ()):
                    exp = w + prefix[i] + cat.degree(a)
                    sign = 1 if exp % 2 else -1
                    key = (obj0, K[:i] + (a,) + K[i + 1:])
                    out.add_into(key, V, f.mul(f.of(sign), c))

            for i in range(n):
                for a, b, c in splits.get(K[i], ()):
                    if cat.source(a) != cat.source(K[i]) or cat.target(b) != cat.target(K[i]):
                        continue
                    exp = w + prefix[i] + cat.degree(a)
                    sign = 1 if exp % 2 else -1
                    key = (obj0, K[:i] + (a, b) + K[i + 1:])
                    out.add_into(key, V, f.mul(f.of(sign), c))

            for a in by_src.get(end, ()):
                val = bm.left({a: f.one}, V)
                if val:
                    out.add_into((obj0, K + (a,)), val, vsign)

            for a in by_tgt.get(obj0, ()):
                val = bm.right(V, {a: f.one})
                if val:
                    exp = w * (cat.degree(a) - 1) + cat.degree(a)
                    sign = -1 if exp % 2 else 1
                    out.add_into((cat.source(a), (a,) + K), val, f.of(sign))
        return out

    def differential(self, psi: HochCochain) -> HochCochain:
        """Total differential, truncated at the arity cap.

        Dropping a nonzero component whose total degree lies inside the
        certified degree window is a hard error: the window was not exact.
        """
        full = self.differential_raw(psi)
        dropped = {k: v for k, v in full.parts.items() if len(k[1]) > self.window.l_max}
        if dropped:
            T = full.total_degree
            if self.window.degree_min <= T <= self.window.degree_max and self.exactness_flag:
                raise WindowOverflowError(
                    f"nonzero arity-{max(len(k[1]) for k in dropped)} component dropped "
                    f"inside the certified window")
        return full.restrict_to_window()

    # -- linear algebra ----------------------------------------------------
    def vectorize(self, psi: HochCochain, basis_list):
        index = {key: i for i, key in enumerate(basis_list)}
        vec = {}
        for (obj0, K), V in psi.parts.items():
            for m, c in V.items():
                i = index.get((obj0, K, m))
                if i is None:
                    raise ValueError(f"component {(obj0, K, m)} outside the window basis")
                vec[i] = c
        return vec

    def unvectorize(self, vec, basis_list, total_degree):
        psi = self.zero(total_degree)
        for i, c in vec.items():
            obj0, K, m = basis_list[i]
            psi.add_into((obj0, K), {m: c})
        return psi

    def differential_matrix(self, n) -> SparseMatrix:
        dom = self.basis(n)
        cod = self.basis(n + 1)
        cod_index = {key: i for i, key in enumerate(cod)}
        entries = {}
        for j, key in enumerate(dom):
            image = self.differential(self.elementary(key, n))
            for (obj0, K), V in image.parts.items():
                for m, c in V.items():
                    i = cod_index.get((obj0, K, m))
                    if i is None:
                        raise WindowOverflowError(
                            f"differential leaves the degree window at {(obj0, K, m)}")
                    entries[(i, j)] = c
        return SparseMatrix(len(cod), len(dom), self.field, entries)

    def require_exact_for_degree(self, n):
        flag, cert = self.exactness()
        if not flag:
            raise WindowNotExactError(f"window not exact: {cert['reason']}")
        if not (self.window.degree_min <= n - 1 and n + 1 <= self.window.degree_max):
            raise WindowNotExactError(
                f"degree window must contain {n - 1}..{n + 1} for cohomology at {n}")

    def cohomology(self, n):
        """(dimension, representative cocycles) at total degree n, certified."""
        self.require_exact_for_degree(n)
        d_out = self.differential_matrix(n)
        _, kernel, _ = rank_kernel_image(d_out)
        d_in = self.differential_matrix(n - 1)
        rank_in, _, image = rank_kernel_image(d_in)
        dim = len(kernel) - rank_in
        chosen = extend_basis(image, kernel, self.field)
        dom = self.basis(n)
        reps = [self.unvectorize(kernel[i], dom, n) for i in chosen]
        if len(reps) != dim:
            raise AssertionError("representative count disagrees with dimension")
        return dim, reps


def cosimplicial_component(cat: DgCategory, bimod: DgBimodule, l: int,
                           window: TruncationWindow = None, reduced=True):
    """The arity-l stage as a complex graded by internal degree.

    Returns (complex-like dict) with keys 'dims' (internal degree -> dim)
    and 'basis' (internal degree -> elementary keys); the internal
    differential is part of the total differential and is exercised there.
    """
    hc = HochComplex(cat, bimod, TruncationWindow(l, 0, 0), reduced=reduced)
    dims = {}
    basis = {}
    for obj0, labels in hc.tuples(l):
        end = cat.target(labels[-1]) if labels else obj0
        argdeg = sum(cat.degree(a) for a in labels)
        for m in bimod.basis(obj0, end):
            t = bimod.degree(m) - argdeg
            dims[t] = dims.get(t, 0) + 1
            basis.setdefault(t, []).append((obj0, labels, m))
    return {"arity": l, "dims": dims, "basis": basis}


def hochschild_cohomology(cat: DgCategory, bimod: DgBimodule, n: int,
                          window: TruncationWindow, reduced=True):
    hc = HochComplex(cat, bimod, window, reduced=reduced)
    return hc.cohomology(n)


def coherence_check(psi: HochCochain) -> ValidationReport:
    """Per-arity coherence equations for a degree-0 cochain.

    Arity a reports whether the arity-(a+1) component of the total
    differential vanishes; the cochain is closed (within the window) iff all
    hold.  The closedness claim is certified only on exact windows; on
    other windows the per-arity results are still reported, flagged
    uncertified.
    """
    if psi.total_degree != 0:
        raise ValueError("coherence equations apply to total degree 0 cochains")
    ctx = psi.ctx
    rep = ValidationReport("coherence equations")
    flag, cert = ctx.exactness()
    rep.meta["window_exact"] = flag
    rep.meta["window_certificate"] = cert
    image = ctx.differential_raw(psi)
    by_arity = {}
    for (obj0, K), V in image.parts.items():
        by_arity.setdefault(len(K), []).append(((obj0, K), V))
    for a in range(ctx.window.l_max):
        residues = by_arity.get(a + 1, [])
        if residues:
            key, val = sorted(residues)[0]
            rep.check(f"arity {a} equation", False,
                      f"residue at tuple {key}: {val}")
        else:
            rep.check(f"arity {a} equation", True)
    rep.meta["closed_certified"] = flag and rep.passed
    return rep


class CoherentHomCategory:
    """The category of dg functors D -> E with Hochschild hom complexes.

    Hom(F, G) is the truncated total complex over the coefficient bimodule
    (x, y) -> E(F x, G y); composition is the convolution below and the
    identity at F is the unit cochain.
    """

    def __init__(self, D: DgCategory, E: DgCategory, functors, window: TruncationWindow):
        self.D = D
        self.E = E
        self.window = window
        self.functors = {fun.name: fun for fun in functors}
        if len(self.functors) != len(functors):
            raise ValueError("functor names must be distinct")
        self._homs = {}

    def hom(self, Fname, Gname) -> HochComplex:
        key = (Fname, Gname)
        if key not in self._homs:
            F, G = self.functors[Fname], self.functors[Gname]
            bm = bimodule_from_functors(F, G)
            self._homs[key] = HochComplex(self.D, bm, self.window, reduced=True)
        return self._homs[key]

    def identity(self, Fname) -> HochCochain:
        hc = self.hom(Fname, Fname)
        F = self.functors[Fname]
        psi = hc.zero(0)
        f = self.E.field
        for obj in self.D.objects:
            unit = self.E.unit(F.on_object(obj))
            psi.add_into((obj, ()), {f"{unit}[{obj},{obj}]": f.one})
        return psi

    def compose(self, psi: HochCochain, phi: HochCochain,
                names: tuple) -> HochCochain:
        """Convolution of psi in Hom(G, H) with phi in Hom(F, G).

        (psi . phi)(a_1..a_n) sums over splittings a_1..a_q | a_{q+1}..a_n;
        psi consumes the trailing segment, values compose in the target
        category, and the Koszul sign is (-1)^(T_psi * sum_{j<=q} ||a_j||).
        On the identity-functor endomorphism complex this is the cup
        product, table for table.
        """
        Fname, Gname, Hname = names
        target_ctx = self.hom(Fname, Hname)
        cat, E, f = self.D, self.E, self.E.field
        out = HochCochain(target_ctx, psi.total_degree + phi.total_degree)
        for (o0, K0), V0 in phi.parts.items():
            bar0 = sum(cat.degree(a) - 1 for a in K0)
            sign = f.of(-1 if (psi.total_degree * bar0) % 2 else 1)
            end0 = cat.target(K0[-1]) if K0 else o0
            for (o1, K1), V1 in psi.parts.items():
                if end0 != o1:
                    continue
                value = self._compose_values(V1, V0, o0,
                                             cat.target(K1[-1]) if K1 else o1)
                if value:
                    out.add_into((o0, K0 + K1), value, sign)
        return out

    def _compose_values(self, V1, V0, x, y):
        """Compose bimodule values in E and re-wrap for the pair (x, y)."""
        E, f = self.E, self.E.field
        out = {}
        for m1, c1 in V1.items():
            e1 = self._unwrap(m1)
            for m0, c0 in V0.items():
                e0 = self._unwrap(m0)
                comp = E.compose({e1: f.one}, {e0: f.one})
                for e, c in comp.items():
                    out = elem_add(f, out, {f"{e}[{x},{y}]": f.mul(f.mul(c1, c0), c)})
        return out

    @staticmethod
    def _unwrap(mlabel):
        return mlabel.rsplit("[", 1)[0]


def coherent_hom(D: DgCategory, E: DgCategory, functors, window: TruncationWindow):
    return CoherentHomCategory(D, E, functors, window)


def diagonal_hoch(cat: DgCategory, window: TruncationWindow, reduced=True) -> HochComplex:
    """Hoch of a dg category with diagonal coefficients."""
    from .dgcat import diagonal_bimodule
    return HochComplex(cat, diagonal_bimodule(cat), window, reduced=reduced)


def endo_coherent_category(cat: DgCategory, window: TruncationWindow):
    """[A, A] restricted to the identity functor; hom(id, id) is Hoch(A)."""
    return CoherentHomCategory(cat, cat, [identity_functor(cat)], window)
