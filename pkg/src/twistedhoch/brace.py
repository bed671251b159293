"""Brace structures: cup products and brace insertion operations on a based
complex, the standard braces on the Hochschild complex of a dg algebra, the
relation verifier, the Gerstenhaber bracket, and brace morphisms.

Sign policy (shared with the rest of the package): all signs are Koszul
signs for the bar weight ||v|| = T_v - 1, T_v the total degree.  The cup
product is the convolution in composition order: the left factor consumes
the trailing path segment, so on the endomorphism complex of the identity
functor it is literally the coherent composition.  The verified relations,
with p_k = ||y_1|| + ... + ||y_{k}||:

  unit       e u x = x u e = x;  braces vanish on e
  assoc      (x u y) u z = x u (y u z)
  distrib    (x u y){z_1..z_n} =
                 sum_k (-1)^(T_x * (||z_1||+..+||z_k||))
                       x{z_{k+1}..z_n} u y{z_1..z_k}
  pre-Jacobi x{y_1..y_m}{z_1..z_n} =
                 sum over 0 <= i_1 <= j_1 <= ... <= j_m <= n of
                 (-1)^(sum_p ||y_p|| sum_{q<=i_p} ||z_q||)
                       x{z_1.., y_1{z_{i_1+1}..z_{j_1}}, .., z_n}
  diff       d(x{y_1..y_n}) = {dx; y_1..y_n}
                 + sum_p (-1)^(||x|| + p_{p-1}) x{y_1,..,d y_p,..,y_n}
                 - sum_i (-1)^(||x|| + p_i) x{y_1,.., y_{i+1} u y_i, ..,y_n}
                 + (-1)^(||x|| + p_{n-1}) y_n u x{y_1..y_{n-1}}
                 + (-1)^(T_x ||y_1||) x{y_2..y_n} u y_1

A brace argument listed first is inserted earliest along the path; these
forms are pinned against the standard Hochschild braces by the test suite,
exactly, over Q, F_3 and F_5.
"""

from __future__ import annotations

import itertools

from .complexes import elem_add, elem_scale
from .dgcat import DgCategory, diagonal_bimodule
from .hochschild import HochCochain, HochComplex, TruncationWindow, WindowNotExactError
from .reports import ValidationReport


def bar_weight(deg):
    return deg - 1


class BraceStructure:
    """Interface: a based complex with cup and braces up to an arity bound.

    Elements are sparse dicts {basis label: scalar}.  Subclasses provide the
    basis, degrees, differential, and the two operations on elements.
    """

    field = None
    arity_bound = None
    unit_label = None

    def basis(self):
        raise NotImplementedError

    def degree(self, label):
        raise NotImplementedError

    def d(self, elem):
        raise NotImplementedError

    def cup(self, x, y):
        raise NotImplementedError

    def brace(self, x, ys):
        raise NotImplementedError

    # -- shared helpers ----------------------------------------------------
    def element_degree(self, elem):
        degs = {self.degree(l) for l in elem}
        if not degs:
            return None
        if len(degs) != 1:
            raise ValueError(f"inhomogeneous element: degrees {sorted(degs)}")
        return degs.pop()

    def unit_element(self):
        return {self.unit_label: self.field.one}

    def basis_in_degrees(self, lo, hi):
        return [l for l in self.basis() if lo <= self.degree(l) <= hi]


class TableBraces(BraceStructure):
    """A brace structure given by finite tables over a based complex.

    Absent table entries mean zero.  cup_table maps (x, y) -> element;
    brace_tables[n] maps (x, (y_1..y_n)) -> element.
    """

    def __init__(self, field, labels_with_degrees, unit_label, cup_table,
                 brace_tables=None, differential=None, arity_bound=3):
        self.field = field
        self._degree = dict(labels_with_degrees)
        self._basis = sorted(self._degree)
        self.unit_label = unit_label
        self.arity_bound = arity_bound
        f = field
        self.cup_table = {k: self._clean(v) for k, v in cup_table.items()}
        self.brace_tables = {}
        for n, table in (brace_tables or {}).items():
            self.brace_tables[n] = {k: self._clean(v) for k, v in table.items()}
        self.diff_table = {k: self._clean(v) for k, v in (differential or {}).items()}

    def _clean(self, elem):
        f = self.field
        return {k: f.of(v) for k, v in elem.items() if not f.is_zero(f.of(v))}

    def basis(self):
        return list(self._basis)

    def degree(self, label):
        return self._degree[label]

    def d(self, elem):
        f = self.field
        out = {}
        for l, c in elem.items():
            out = elem_add(f, out, elem_scale(f, c, self.diff_table.get(l, {})))
        return out

    def cup_labels(self, x, y):
        if x == self.unit_label:
            return {y: self.field.one}
        if y == self.unit_label:
            return {x: self.field.one}
        return dict(self.cup_table.get((x, y), {}))

    def brace_labels(self, x, ys):
        if x == self.unit_label or self.unit_label in ys:
            return {}
        return dict(self.brace_tables.get(len(ys), {}).get((x, tuple(ys)), {}))

    def cup(self, x, y):
        f = self.field
        out = {}
        for lx, cx in x.items():
            for ly, cy in y.items():
                out = elem_add(f, out, elem_scale(f, f.mul(cx, cy), self.cup_labels(lx, ly)))
        return out

    def brace(self, x, ys):
        f = self.field
        out = {}
        for lx, cx in x.items():
            for combo in itertools.product(*[list(y.items()) for y in ys]):
                coeff = cx
                for _, c in combo:
                    coeff = f.mul(coeff, c)
                out = elem_add(f, out, elem_scale(
                    f, coeff, self.brace_labels(lx, tuple(l for l, _ in combo))))
        return out


def algebra_table_braces(cat: DgCategory, arity_bound=3, brace_tables=None):
    """A dg algebra with its product as cup and the given (often zero) braces."""
    if len(cat.objects) != 1:
        raise ValueError("a brace carrier from an algebra needs a single object")
    labels = [(l, cat.degree(l)) for l in sorted(cat.mor)]
    cup = {}
    f = cat.field
    for x in cat.mor:
        for y in cat.mor:
            if cat.is_unit(x) or cat.is_unit(y):
                continue
            prod = cat.compose_labels(x, y)
            if prod:
                cup[(x, y)] = prod
    diff = {l: cat.d_label(l) for l in cat.mor if cat.d_label(l)}
    return TableBraces(f, labels, cat.unit(cat.objects[0]), cup,
                       brace_tables or {}, diff, arity_bound)


class HochschildBraces(BraceStructure):
    """The standard brace structure on the Hochschild complex of a dg algebra.

    The carrier basis is the truncated reduced total complex within the
    window; operations are computed exactly by the insertion formulas and may
    produce components beyond the window, which receive fresh labels so that
    relation checks compare full exact values.
    """

    def __init__(self, cat: DgCategory, window: TruncationWindow, arity_bound=3,
                 require_exact=True):
        if len(cat.objects) != 1:
            raise ValueError("Hochschild braces are set up for a dg algebra here")
        self.cat = cat
        self.field = cat.field
        self.window = window
        self.arity_bound = arity_bound
        self.obj = cat.objects[0]
        self.bimod = diagonal_bimodule(cat)
        self.ctx = HochComplex(cat, self.bimod, window, reduced=True)
        if require_exact and not self.ctx.exactness_flag:
            raise WindowNotExactError(
                "brace carrier window is not exact: " + self.ctx.exactness()[1]["reason"])
        self._key_of = {}
        self._carrier = []
        for n in range(window.degree_min, window.degree_max + 1):
            for key in self.ctx.basis(n):
                label = self._register(key)
                self._carrier.append(label)
        unit_key = (self.obj, (), f"{cat.unit(self.obj)}[{self.obj},{self.obj}]")
        self.unit_label = self._register(unit_key)
        if self.unit_label not in self._carrier:
            raise ValueError("the unit cochain must lie inside the carrier window")

    def _register(self, key):
        obj0, K, m = key
        label = f"{'|'.join(K)}=>{m}" if K else f"=>{m}"
        self._key_of[label] = key
        return label

    def basis(self):
        return list(self._carrier)

    def key(self, label):
        return self._key_of[label]

    def degree(self, label):
        obj0, K, m = self._key_of[label]
        return len(K) + self.bimod.degree(m) - sum(self.cat.degree(a) for a in K)

    # -- conversions -------------------------------------------------------
    def to_cochain(self, elem) -> HochCochain:
        T = self.element_degree(elem)
        psi = self.ctx.zero(0 if T is None else T)
        for l, c in elem.items():
            obj0, K, m = self._key_of[l]
            psi.add_into((obj0, K), {m: c})
        return psi

    def from_cochain(self, psi: HochCochain):
        out = {}
        for (obj0, K), V in psi.parts.items():
            for m, c in V.items():
                label = self._register((obj0, K, m))
                out[label] = c
        return out

    def d(self, elem):
        if not elem:
            return {}
        return self.from_cochain(self.ctx.differential_raw(self.to_cochain(elem)))

    # -- operations ----------------------------------------------------
    def _unwrap(self, mlabel):
        return mlabel.rsplit("[", 1)[0]

    def _wrap(self, alabel):
        return f"{alabel}[{self.obj},{self.obj}]"

    def cup_cochain(self, psi: HochCochain, phi: HochCochain) -> HochCochain:
        """Convolution in composition order: psi consumes the trailing path
        segment and its value post-composes; the Koszul sign is the total
        degree of psi against the bar weights of phi's arguments."""
        cat, f = self.cat, self.field
        out = self.ctx.zero(psi.total_degree + phi.total_degree)
        for (o0, K0), V0 in phi.parts.items():
            bar0 = sum(cat.degree(a) - 1 for a in K0)
            sign = f.of(-1 if (psi.total_degree * bar0) % 2 else 1)
            for (o1, K1), V1 in psi.parts.items():
                value = {}
                for m1, c1 in V1.items():
                    for m0, c0 in V0.items():
                        prod = cat.compose({self._unwrap(m1): f.one},
                                           {self._unwrap(m0): f.one})
                        for a, c in prod.items():
                            value = elem_add(f, value,
                                             {self._wrap(a): f.mul(f.mul(c1, c0), c)})
                if value:
                    out.add_into((o0, K0 + K1), value, sign)
        return out

    def brace_cochain(self, x: HochCochain, ys) -> HochCochain:
        """Insertion braces {x; y_1, ..., y_k} with bar-weight Koszul signs."""
        cat, f = self.cat, self.field
        k = len(ys)
        T = x.total_degree + sum(y.total_degree - 1 for y in ys)
        out = self.ctx.zero(T)
        if k == 0:
            return x.copy()
        ybars = [y.total_degree - 1 for y in ys]
        yparts = [list(y.parts.items()) for y in ys]
        for (obj0, K), V in x.parts.items():
            r = len(K)
            if r < k:
                continue
            for positions in itertools.combinations(range(r), k):
                for blocks in itertools.product(*yparts):
                    # blocks[p] = ((obj_p, K_p), V_p): y_p consumes K_p in place
                    # of slot positions[p]; its value coefficient is read off
                    # against the slot label of x.
                    coeff = f.one
                    ok = True
                    for p in range(k):
                        (_, _), Vp = blocks[p]
                        c = Vp.get(self._wrap(K[positions[p]]))
                        if c is None:
                            ok = False
                            break
                        coeff = f.mul(coeff, c)
                    if not ok:
                        continue
                    exponent = 0
                    new_tuple = []
                    cursor = 0
                    bar_prefix = 0
                    for p in range(k):
                        while cursor < positions[p]:
                            new_tuple.append(K[cursor])
                            bar_prefix += cat.degree(K[cursor]) - 1
                            cursor += 1
                        exponent += ybars[p] * bar_prefix
                        (_, Kp), _ = blocks[p]
                        for a in Kp:
                            new_tuple.append(a)
                            bar_prefix += cat.degree(a) - 1
                        cursor += 1
                    while cursor < r:
                        new_tuple.append(K[cursor])
                        cursor += 1
                    sign = f.of(-1 if exponent % 2 else 1)
                    out.add_into((obj0, tuple(new_tuple)), V, f.mul(sign, coeff))
        return out

    def cup(self, x, y):
        if not x or not y:
            return {}
        return self.from_cochain(self.cup_cochain(self.to_cochain(x), self.to_cochain(y)))

    def brace(self, x, ys):
        if not x or any(not y for y in ys):
            return {}
        return self.from_cochain(
            self.brace_cochain(self.to_cochain(x), [self.to_cochain(y) for y in ys]))


def hochschild_braces(cat: DgCategory, window: TruncationWindow,
                      arity_bound=3, require_exact=True) -> HochschildBraces:
    return HochschildBraces(cat, window, arity_bound, require_exact=require_exact)


class MutatedBraces(BraceStructure):
    """A wrapper flipping the sign of single table entries of a base structure.

    mutations: iterable of ("cup"|"brace"|"diff", input key, output label);
    for cup the key is (x, y), for braces (x, (y_1..y_n)), for diff a label.
    Operations are evaluated by multilinear expansion over basis labels so
    the mutation acts exactly like a single sign flip in the printed table.
    """

    def __init__(self, base: BraceStructure, mutations):
        self.base = base
        self.field = base.field
        self.arity_bound = base.arity_bound
        self.unit_label = base.unit_label
        self.mutations = set(mutations)

    def basis(self):
        return self.base.basis()

    def degree(self, label):
        return self.base.degree(label)

    def _post(self, op, key, result):
        f = self.field
        for (mop, mkey, out_label) in self.mutations:
            if mop == op and mkey == key and out_label in result:
                flipped = f.neg(result[out_label])
                result = dict(result)
                result[out_label] = flipped
        return result

    def d(self, elem):
        f = self.field
        out = {}
        for l, c in elem.items():
            img = self._post("diff", l, self.base.d({l: f.one}))
            out = elem_add(f, out, elem_scale(f, c, img))
        return out

    def cup(self, x, y):
        f = self.field
        out = {}
        for lx, cx in x.items():
            for ly, cy in y.items():
                img = self._post("cup", (lx, ly), self.base.cup({lx: f.one}, {ly: f.one}))
                out = elem_add(f, out, elem_scale(f, f.mul(cx, cy), img))
        return out

    def brace(self, x, ys):
        f = self.field
        out = {}
        for lx, cx in x.items():
            for combo in itertools.product(*[list(y.items()) for y in ys]):
                coeff = cx
                for _, c in combo:
                    coeff = f.mul(coeff, c)
                key = (lx, tuple(l for l, _ in combo))
                img = self._post("brace", key,
                                 self.base.brace({lx: f.one},
                                                 [{l: f.one} for l, _ in combo]))
                out = elem_add(f, out, elem_scale(f, coeff, img))
        return out


def gerstenhaber_bracket(x, y, b: BraceStructure):
    """[x, y] = {x; y} - (-1)^(||x|| ||y||) {y; x}."""
    f = b.field
    dx, dy = b.element_degree(x), b.element_degree(y)
    if dx is None or dy is None:
        return {}
    sign = f.of(-1 if ((dx - 1) * (dy - 1)) % 2 else 1)
    return elem_add(f, b.brace(x, [y]),
                    elem_scale(f, f.neg(sign), b.brace(y, [x])))


def _fmt_elem(elem):
    return "{" + ", ".join(f"{l}: {c}" for l, c in sorted(elem.items())) + "}"


def check_brace_relations(b: BraceStructure, degree_min=None, degree_max=None,
                          max_failures=5, labels=None) -> ValidationReport:
    """Exact verification of the brace relations on all basis tuples within
    the arity bound and degree window (or an explicit label subset)."""
    rep = ValidationReport("brace relations")
    f = b.field
    if degree_min is None or degree_max is None:
        degs = [b.degree(l) for l in b.basis()]
        degree_min = min(degs, default=0) if degree_min is None else degree_min
        degree_max = max(degs, default=0) if degree_max is None else degree_max
    rep.meta.update({"arity_bound": b.arity_bound,
                     "degree_min": degree_min, "degree_max": degree_max})
    if labels is None:
        labels = b.basis_in_degrees(degree_min, degree_max)
    one = f.one

    def el(l):
        return {l: one}

    def bw(l):
        return b.degree(l) - 1

    # unitality
    failures = []
    e = b.unit_element()
    for l in labels:
        if b.cup(e, el(l)) != el(l) or b.cup(el(l), e) != el(l):
            failures.append(f"unit fails to be a cup unit at {l}")
    for l in labels:
        if b.brace(e, [el(l)]):
            failures.append(f"{{e; {l}}} != 0")
        if b.brace(el(l), [e]):
            failures.append(f"{{{l}; e}} != 0")
    rep.tally("unitality", 2 * len(labels), failures)

    # cup associativity
    failures = []
    total = 0
    for x, y, z in itertools.product(labels, repeat=3):
        total += 1
        lhs = b.cup(b.cup(el(x), el(y)), el(z))
        rhs = b.cup(el(x), b.cup(el(y), el(z)))
        if lhs != rhs:
            failures.append(f"cup associativity on ({x},{y},{z}): "
                            f"{_fmt_elem(lhs)} != {_fmt_elem(rhs)}")
            if len(failures) >= max_failures:
                break
    rep.tally("cup associativity", total, failures)

    # cup distributivity over braces
    failures = []
    total = 0
    for n in range(1, b.arity_bound + 1):
        for x, y in itertools.product(labels, repeat=2):
            for zs in itertools.product(labels, repeat=n):
                total += 1
                lhs = b.brace(b.cup(el(x), el(y)), [el(z) for z in zs])
                rhs = {}
                for k in range(n + 1):
                    exponent = b.degree(x) * sum(bw(z) for z in zs[:k])
                    left = b.brace(el(x), [el(z) for z in zs[k:]])
                    right = b.brace(el(y), [el(z) for z in zs[:k]])
                    term = elem_scale(f, f.of(-1 if exponent % 2 else 1),
                                      b.cup(left, right))
                    rhs = elem_add(f, rhs, term)
                if lhs != rhs:
                    failures.append(f"distributivity on ({x},{y};{zs}): "
                                    f"{_fmt_elem(lhs)} != {_fmt_elem(rhs)}")
                if len(failures) >= max_failures:
                    break
            if len(failures) >= max_failures:
                break
        if len(failures) >= max_failures:
            break
    rep.tally("cup distributivity", total, failures)

    # higher pre-Jacobi
    failures = []
    total = 0
    for m in range(1, b.arity_bound + 1):
        for n in range(1, b.arity_bound - m + 1):
            for x in labels:
                for ys in itertools.product(labels, repeat=m):
                    for zs in itertools.product(labels, repeat=n):
                        total += 1
                        lhs = b.brace(b.brace(el(x), [el(y) for y in ys]),
                                      [el(z) for z in zs])
                        rhs = pre_jacobi_rhs(b, x, ys, zs)
                        if lhs != rhs:
                            failures.append(
                                f"pre-Jacobi on ({x};{ys};{zs}): "
                                f"{_fmt_elem(lhs)} != {_fmt_elem(rhs)}")
                        if len(failures) >= max_failures:
                            break
                    if len(failures) >= max_failures:
                        break
                if len(failures) >= max_failures:
                    break
    rep.tally("higher pre-Jacobi", total, failures)

    # differential relation
    failures = []
    total = 0
    for n in range(1, b.arity_bound + 1):
        for x in labels:
            for ys in itertools.product(labels, repeat=n):
                total += 1
                lhs = b.d(b.brace(el(x), [el(y) for y in ys]))
                rhs = brace_differential_rhs(b, x, ys)
                if lhs != rhs:
                    failures.append(f"differential relation on ({x};{ys}): "
                                    f"{_fmt_elem(lhs)} != {_fmt_elem(rhs)}")
                if len(failures) >= max_failures:
                    break
            if len(failures) >= max_failures:
                break
    rep.tally("differential relation", total, failures)

    return rep


def pre_jacobi_rhs(b: BraceStructure, x, ys, zs):
    """Right-hand side of the pre-Jacobi relation on basis labels."""
    f = b.field
    m, n = len(ys), len(zs)
    ybar = [b.degree(y) - 1 for y in ys]
    zbar = [b.degree(z) - 1 for z in zs]
    out = {}
    for bounds in nested_intervals(m, n):
        exponent = 0
        args = []
        cursor = 0
        inner_ok = True
        inners = []
        for p, (i, j) in enumerate(bounds):
            exponent += ybar[p] * sum(zbar[:i])
            for q in range(cursor, i):
                args.append({zs[q]: f.one})
            if j == i:
                inners.append({ys[p]: f.one})
            else:
                inner = b.brace({ys[p]: f.one}, [{zs[q]: f.one} for q in range(i, j)])
                if not inner:
                    inner_ok = False
                inners.append(inner)
            args.append(inners[-1])
            cursor = j
        if not inner_ok:
            continue
        for q in range(cursor, n):
            args.append({zs[q]: f.one})
        term = b.brace({x: f.one}, args)
        out = elem_add(f, out, elem_scale(f, f.of(-1 if exponent % 2 else 1), term))
    return out


def nested_intervals(m, n):
    """All tuples 0 <= i_1 <= j_1 <= i_2 <= ... <= j_m <= n as pairs."""
    results = []

    def grow(prefix, start):
        if len(prefix) == m:
            results.append(tuple(prefix))
            return
        for i in range(start, n + 1):
            for j in range(i, n + 1):
                grow(prefix + [(i, j)], j)

    grow([], 0)
    return results


def brace_differential_rhs(b: BraceStructure, x, ys):
    """Right-hand side of the differential relation on basis labels."""
    f = b.field
    n = len(ys)
    xbar = b.degree(x) - 1
    ybar = [b.degree(y) - 1 for y in ys]
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] + ybar[i]
    el = lambda l: {l: f.one}
    out = b.brace(b.d(el(x)), [el(y) for y in ys])
    for p in range(n):
        sign = f.of(-1 if (xbar + prefix[p]) % 2 else 1)
        args = [el(y) for y in ys]
        args[p] = b.d(el(ys[p]))
        if args[p]:
            out = elem_add(f, out, elem_scale(f, sign, b.brace(el(x), args)))
    for i in range(n - 1):
        sign = f.of(1 if (xbar + prefix[i + 1]) % 2 else -1)
        merged = b.cup(el(ys[i + 1]), el(ys[i]))
        if merged:
            args = [el(ys[q]) for q in range(n) if q not in (i, i + 1)]
            args.insert(i, merged)
            out = elem_add(f, out, elem_scale(f, sign, b.brace(el(x), args)))
    peel_last = b.cup(el(ys[n - 1]), b.brace(el(x), [el(y) for y in ys[:n - 1]]))
    sign = f.of(-1 if (xbar + prefix[n - 1]) % 2 else 1)
    out = elem_add(f, out, elem_scale(f, sign, peel_last))
    peel_first = b.cup(b.brace(el(x), [el(y) for y in ys[1:]]), el(ys[0]))
    sign = f.of(-1 if ((xbar + 1) * ybar[0]) % 2 else 1)
    out = elem_add(f, out, elem_scale(f, sign, peel_first))
    return out


class BraceMorphism:
    """A degree-0 chain map between brace structures given on basis labels."""

    def __init__(self, source: BraceStructure, target: BraceStructure, images,
                 name="phi"):
        self.source = source
        self.target = target
        self.name = name
        f = target.field
        self.images = {}
        for l, elem in images.items():
            clean = {k: f.of(v) for k, v in elem.items() if not f.is_zero(f.of(v))}
            self.images[l] = clean
        for l in source.basis():
            if l not in self.images:
                raise ValueError(f"no image given for basis label {l!r}")
            deg = target.element_degree(self.images[l])
            if deg is not None and deg != source.degree(l):
                raise ValueError(f"image of {l!r} is not degree preserving")

    def apply(self, elem):
        f = self.target.field
        out = {}
        for l, c in elem.items():
            out = elem_add(f, out, elem_scale(f, c, self.images[l]))
        return out


def check_brace_morphism(phi: BraceMorphism, max_failures=5) -> ValidationReport:
    rep = ValidationReport(f"brace morphism {phi.name}")
    src, tgt, f = phi.source, phi.target, phi.target.field
    labels = src.basis()
    el = lambda l: {l: f.one}

    rep.check("unit preserved", phi.apply(src.unit_element()) == tgt.unit_element())

    failures = []
    for l in labels:
        if phi.apply(src.d(el(l))) != tgt.d(phi.apply(el(l))):
            failures.append(f"chain map fails at {l}")
    rep.tally("chain map", len(labels), failures)

    failures = []
    total = 0
    for x, y in itertools.product(labels, repeat=2):
        total += 1
        if phi.apply(src.cup(el(x), el(y))) != tgt.cup(phi.apply(el(x)), phi.apply(el(y))):
            failures.append(f"cup preservation fails at ({x},{y})")
            if len(failures) >= max_failures:
                break
    rep.tally("cup preserved", total, failures)

    failures = []
    total = 0
    bound = min(src.arity_bound, tgt.arity_bound)
    for n in range(1, bound + 1):
        for x in labels:
            for ys in itertools.product(labels, repeat=n):
                total += 1
                lhs = phi.apply(src.brace(el(x), [el(y) for y in ys]))
                rhs = tgt.brace(phi.apply(el(x)), [phi.apply(el(y)) for y in ys])
                if lhs != rhs:
                    failures.append(f"brace preservation fails at ({x};{ys})")
                if len(failures) >= max_failures:
                    break
            if len(failures) >= max_failures:
                break
        if len(failures) >= max_failures:
            break
    rep.tally("braces preserved", total, failures)

    return rep


def identity_brace_morphism(b: BraceStructure) -> BraceMorphism:
    f = b.field
    return BraceMorphism(b, b, {l: {l: f.one} for l in b.basis()}, name="id")
