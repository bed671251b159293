"""Symbolic calculus for twisted tensor products of dg categories.

A twisted product category has pure-tensor generators f(x)id and id(x)g
together with higher generators eps(f; g_1, ..., g_n) measuring the failure
of the two sides to commute.  Morphisms are finite linear combinations of
composable words of letters; this module implements their normal form, the
differential, star composition, the one-sided associator, and the bounded
coherence checks (pentagon and units).

Normal form invariants:

  * every slot holds a basis key of its category (labels for base
    categories, normal words for product categories);
  * no unit letters, no eps with a unit in any slot;
  * no two adjacent pure-left or pure-right letters (merged via the inner
    composition);
  * for a product left factor, an eps whose first slot is a word of length
    at least 2 is expanded into the signed sum of star-products over
    splittings (composites in an abstract base category are opaque and stay
    unexpanded unless composition is requested explicitly).

Degrees: deg eps(f; g_1..g_n) = deg f + sum deg g_j - n.  All signs are
prefix Koszul signs in the bar weights ||g|| = deg g - 1 and deg f; the
exact formulas are pinned by the d.d = 0, associator-compatibility, and
monoid-dictionary tests (see docs/sign_conventions.md):

  d eps(f; g_1..g_n) =
      eps(df; g_1..g_n)
    + sum_p (-1)^(||f|| + P_{p-1}) eps(f; g_1, .., d g_p, .., g_n)
    - sum_i (-1)^(||f|| + P_i)     eps(f; g_1, .., g_{i+1} g_i, .., g_n)
    + (-1)^(||f|| + P_{n-1})       (id (x) g_n) * eps(f; g_1..g_{n-1})
    + (-1)^(deg f * ||g_1||)       eps(f; g_2..g_n) * (id (x) g_1)

  eps(f2 . f1; g_1..g_N) =
      sum_m (-1)^(deg f2 * (||g_1||+..+||g_m||))
            eps(f2; g_{m+1}..g_N) * eps(f1; g_1..g_m)

with P_i = ||g_1|| + ... + ||g_i|| and eps(f; ) read as f (x) id.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dgcat import DgCategory, DgFunctor
from .reports import ValidationReport


# ---------------------------------------------------------------------------
# category nodes and morphism keys
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PL:
    """A pure-left letter: the left morphism tensor an identity."""
    key: object
    obj: object


@dataclass(frozen=True)
class PR:
    """A pure-right letter: an identity tensor the right morphism."""
    obj: object
    key: object


@dataclass(frozen=True)
class EPS:
    """A higher generator eps(first; args)."""
    first: object
    args: tuple


@dataclass(frozen=True)
class Word:
    """A composable word of letters in path order; empty = identity."""
    letters: tuple
    obj: object = None  # anchoring object for the identity word

    def __len__(self):
        return len(self.letters)


class BaseNode:
    """A leaf category: morphism keys are basis labels of a DgCategory."""

    def __init__(self, cat: DgCategory):
        self.cat = cat
        self.field = cat.field
        self.name = cat.name

    def objects(self):
        return list(self.cat.objects)

    def src(self, key):
        return self.cat.source(key)

    def tgt(self, key):
        return self.cat.target(key)

    def deg(self, key):
        return self.cat.degree(key)

    def is_unit(self, key):
        return self.cat.is_unit(key)

    def unit(self, obj):
        return self.cat.unit(obj)

    def compose(self, k2, k1):
        """k2 after k1, as {key: scalar}."""
        return self.cat.compose_labels(k2, k1)

    def d(self, key):
        return self.cat.d_label(key)

    def basis_keys(self):
        return sorted(self.cat.mor)


class ProdNode:
    """A twisted product of two category nodes."""

    def __init__(self, left, right):
        if left.field != right.field:
            raise ValueError("factors over different fields")
        self.left = left
        self.right = right
        self.field = left.field
        self.name = f"({left.name}(x){right.name})"

    def objects(self):
        return [(a, b) for a in self.left.objects() for b in self.right.objects()]

    # -- letter typing ------------------------------------------------------
    def letter_src(self, u):
        if isinstance(u, PL):
            return (self.left.src(u.key), u.obj)
        if isinstance(u, PR):
            return (u.obj, self.right.src(u.key))
        return (self.left.src(u.first), self.right.src(u.args[0]))

    def letter_tgt(self, u):
        if isinstance(u, PL):
            return (self.left.tgt(u.key), u.obj)
        if isinstance(u, PR):
            return (u.obj, self.right.tgt(u.key))
        return (self.left.tgt(u.first), self.right.tgt(u.args[-1]))

    def letter_deg(self, u):
        if isinstance(u, PL):
            return self.left.deg(u.key)
        if isinstance(u, PR):
            return self.right.deg(u.key)
        return (self.left.deg(u.first)
                + sum(self.right.deg(g) for g in u.args) - len(u.args))

    # -- key interface (keys are Words) --------------------------------------
    def src(self, w: Word):
        return w.obj if not w.letters else self.letter_src(w.letters[0])

    def tgt(self, w: Word):
        return w.obj if not w.letters else self.letter_tgt(w.letters[-1])

    def deg(self, w: Word):
        return sum(self.letter_deg(u) for u in w.letters)

    def is_unit(self, w: Word):
        return not w.letters

    def unit(self, obj):
        return Word((), obj)

    def compose(self, w2, w1):
        return star_formal(self, {w2: self.field.one}, {w1: self.field.one})

    def d(self, w: Word):
        return word_differential(self, w)

    def basis_keys(self):
        raise NotImplementedError("product categories have unbounded bases")


def formal_add(field, acc, key, coeff):
    cur = field.add(acc.get(key, field.zero), coeff)
    if field.is_zero(cur):
        acc.pop(key, None)
    else:
        acc[key] = cur


def formal_scale(field, fs, c):
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, v) for k, v in fs.items()}


def formal_sum(field, *terms):
    out = {}
    for fs in terms:
        for k, v in fs.items():
            formal_add(field, out, k, v)
    return out


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def normal_word(node: ProdNode, letters, obj=None):
    """Normalize a list of composable letters into a formal sum of words.

    Unit letters drop, adjacent pure letters of the same side merge through
    the inner composition (which may branch into sums), and eps letters with
    unit slots have already been killed at construction.
    """
    f = node.field
    work = [(tuple(letters), f.one)]
    out = {}
    while work:
        ls, coeff = work.pop()
        # drop unit letters
        stripped = []
        for u in ls:
            if isinstance(u, PL) and node.left.is_unit(u.key):
                continue
            if isinstance(u, PR) and node.right.is_unit(u.key):
                continue
            stripped.append(u)
        ls = tuple(stripped)
        merged = False
        for i in range(len(ls) - 1):
            a, b = ls[i], ls[i + 1]
            if isinstance(a, PL) and isinstance(b, PL):
                comp = node.left.compose(b.key, a.key)
                for k, c in comp.items():
                    work.append((ls[:i] + (PL(k, a.obj),) + ls[i + 2:], f.mul(coeff, c)))
                merged = True
                break
            if isinstance(a, PR) and isinstance(b, PR):
                comp = node.right.compose(b.key, a.key)
                for k, c in comp.items():
                    work.append((ls[:i] + (PR(a.obj, k),) + ls[i + 2:], f.mul(coeff, c)))
                merged = True
                break
        if merged:
            continue
        if not ls:
            if obj is None:
                raise ValueError("identity word needs an anchoring object")
            formal_add(f, out, Word((), obj), coeff)
        else:
            for i in range(len(ls) - 1):
                if node.letter_tgt(ls[i]) != node.letter_src(ls[i + 1]):
                    raise ValueError(f"non-composable word at position {i}")
            formal_add(f, out, Word(ls), coeff)
    return out


def make_eps(node: ProdNode, first, args, right_obj=None):
    """eps(first; args) as a formal sum of normal words.

    first: a key of the left factor, or a list of keys (a composition chain
    in path order) to be expanded by the splitting rule; args: keys of the
    right factor.  Empty args give the pure-left letter anchored at
    right_obj.
    """
    f = node.field
    if isinstance(first, (list, tuple)) and not isinstance(first, Word):
        chain = list(first)
    elif isinstance(first, Word) and len(first) != 1:
        if len(first) == 0:
            return {}  # eps with a unit first slot
        chain = [Word((u,)) for u in first.letters]
    else:
        chain = [first]
    chain = [c for c in chain]
    if len(chain) == 1:
        fk = chain[0]
        if node.left.is_unit(fk):
            return {}
        if not args:
            if right_obj is None:
                raise ValueError("pure-left letter needs its right object")
            return normal_word(node, [PL(fk, right_obj)])
        if any(node.right.is_unit(g) for g in args):
            return {}
        letter = EPS(fk, tuple(args))
        return normal_word(node, [letter])
    # splitting rule: eps(f2 . f1; args) with f1 the first chain entry and
    # sign (-1)^(deg f1 * sum of trailing bar weights)
    f1, rest = chain[0], chain[1:]
    N = len(args)
    deg_f1 = node.left.deg(f1)
    out = {}
    robj_src = node.right.src(args[0]) if args else right_obj
    robj_tgt = node.right.tgt(args[-1]) if args else right_obj
    for m in range(N + 1):
        early, late = args[:m], args[m:]
        bar_late = sum(node.right.deg(g) - 1 for g in late)
        sign = f.of(-1 if (deg_f1 * bar_late) % 2 else 1)
        cut = node.right.tgt(args[m - 1]) if m else robj_src
        left_fs = make_eps(node, rest, late, right_obj=robj_tgt if not late else None)
        right_fs = make_eps(node, [f1], early, right_obj=cut if not early else None)
        prod = star_formal(node, left_fs, right_fs)
        for k, c in prod.items():
            formal_add(f, out, k, f.mul(sign, c))
    return out


def eps_multilinear(node: ProdNode, first_fs, arg_fss, right_obj=None):
    """eps with formal-sum slots, expanded multilinearly."""
    f = node.field
    out = {}
    for fk, cf in first_fs.items():
        for combo in itertools.product(*[list(a.items()) for a in arg_fss]):
            coeff = cf
            for _, c in combo:
                coeff = f.mul(coeff, c)
            term = make_eps(node, fk, [k for k, _ in combo], right_obj=right_obj)
            for k, c in term.items():
                formal_add(f, out, k, f.mul(coeff, c))
    return out


def star_formal(node: ProdNode, fs2, fs1):
    """fs2 after fs1: concatenate words (path order) and normalize."""
    f = node.field
    out = {}
    for w1, c1 in fs1.items():
        for w2, c2 in fs2.items():
            if node.tgt(w1) != node.src(w2):
                continue
            coeff = f.mul(c2, c1)
            res = normal_word(node, w1.letters + w2.letters, obj=node.src(w1))
            for k, c in res.items():
                formal_add(f, out, k, f.mul(coeff, c))
    return out


# ---------------------------------------------------------------------------
# the differential
# ---------------------------------------------------------------------------

def letter_differential(node: ProdNode, u):
    """Differential of a single letter, as a formal sum of words."""
    f = node.field
    if isinstance(u, PL):
        out = {}
        for k, c in node.left.d(u.key).items():
            for w, cc in normal_word(node, [PL(k, u.obj)]).items():
                formal_add(f, out, w, f.mul(c, cc))
        return out
    if isinstance(u, PR):
        out = {}
        for k, c in node.right.d(u.key).items():
            for w, cc in normal_word(node, [PR(u.obj, k)]).items():
                formal_add(f, out, w, f.mul(c, cc))
        return out

    fk, args = u.first, list(u.args)
    n = len(args)
    degf = node.left.deg(fk)
    gbar = [node.right.deg(g) - 1 for g in args]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + gbar[i]
    out = {}

    for k, c in node.left.d(fk).items():
        term = make_eps(node, k, args)
        for w, cc in term.items():
            formal_add(f, out, w, f.mul(c, cc))

    for p in range(n):
        sign = f.of(1 if (degf + suffix[p + 1]) % 2 else -1)
        for k, c in node.right.d(args[p]).items():
            term = make_eps(node, fk, args[:p] + [k] + args[p + 1:])
            for w, cc in term.items():
                formal_add(f, out, w, f.mul(f.mul(sign, c), cc))

    for i in range(n - 1):
        sign = f.of(-1 if (degf + suffix[i + 1]) % 2 else 1)
        for k, c in node.right.compose(args[i + 1], args[i]).items():
            term = make_eps(node, fk, args[:i] + [k] + args[i + 2:])
            for w, cc in term.items():
                formal_add(f, out, w, f.mul(f.mul(sign, c), cc))

    # peel the last argument to the left as a pure-right letter
    sign = f.of(-1 if (degf * gbar[n - 1]) % 2 else 1)
    head = normal_word(node, [PR(node.left.tgt(fk), args[n - 1])])
    tail = make_eps(node, fk, args[:n - 1],
                    right_obj=node.right.src(args[n - 1]) if n == 1 else None)
    for w, c in star_formal(node, head, tail).items():
        formal_add(f, out, w, f.mul(sign, c))

    # peel the first argument to the right
    sign = f.of(1 if (degf + suffix[1]) % 2 else -1)
    head = make_eps(node, fk, args[1:],
                    right_obj=node.right.tgt(args[0]) if n == 1 else None)
    tail = normal_word(node, [PR(node.left.src(fk), args[0])])
    for w, c in star_formal(node, head, tail).items():
        formal_add(f, out, w, f.mul(sign, c))

    return out


def word_differential(node: ProdNode, w: Word):
    """Graded Leibniz over the word: the differential passes the letters
    applied after (composition order)."""
    f = node.field
    out = {}
    n = len(w.letters)
    degs = [node.letter_deg(u) for u in w.letters]
    for i in range(n):
        passed = sum(degs[i + 1:])
        sign = f.of(-1 if passed % 2 else 1)
        du = letter_differential(node, w.letters[i])
        for piece, c in du.items():
            rest_left = {Word(w.letters[i + 1:]) if i + 1 < n
                         else Word((), node.letter_tgt(w.letters[i])): f.one}
            rest_right = {Word(w.letters[:i]) if i > 0
                          else Word((), node.letter_src(w.letters[i])): f.one}
            glued = star_formal(node, rest_left,
                                star_formal(node, {piece: c}, rest_right))
            for k, cc in glued.items():
                formal_add(f, out, k, f.mul(sign, cc))
    return out


def term_differential(node: ProdNode, fs):
    f = node.field
    out = {}
    for w, c in fs.items():
        for k, cc in word_differential(node, w).items():
            formal_add(f, out, k, f.mul(c, cc))
    return out


# ---------------------------------------------------------------------------
# functors between twisted products
# ---------------------------------------------------------------------------

class TwFunctor:
    """A dg functor between category nodes, described on keys."""

    source = None
    target = None

    def apply_obj(self, obj):
        raise NotImplementedError

    def apply_key(self, key):
        """Image of a basis key as a formal sum over the target node."""
        raise NotImplementedError

    def apply(self, fs):
        f = self.target.field
        out = {}
        for k, c in fs.items():
            for k2, c2 in self.apply_key(k).items():
                formal_add(f, out, k2, f.mul(c, c2))
        return out


class IdentityNodeFunctor(TwFunctor):
    def __init__(self, node):
        self.source = self.target = node

    def apply_obj(self, obj):
        return obj

    def apply_key(self, key):
        return {key: self.source.field.one}


class BaseFunctor(TwFunctor):
    """A DgFunctor between base nodes."""

    def __init__(self, fun: DgFunctor):
        self.fun = fun
        self.source = BaseNode(fun.source)
        self.target = BaseNode(fun.target)

    def apply_obj(self, obj):
        return self.fun.on_object(obj)

    def apply_key(self, key):
        return self.fun.on_label(key)


class TensorRight(TwFunctor):
    """H (x) id: applies H to the left coordinate of a twisted product."""

    def __init__(self, H: TwFunctor, right_node):
        self.H = H
        self.source = ProdNode(H.source, right_node)
        self.target = ProdNode(H.target, right_node)

    def apply_obj(self, obj):
        return (self.H.apply_obj(obj[0]), obj[1])

    def apply_key(self, w: Word):
        node, f = self.target, self.target.field
        if not w.letters:
            return {Word((), self.apply_obj(w.obj)): f.one}
        acc = None
        for u in w.letters:
            if isinstance(u, PL):
                img = {}
                for k, c in self.H.apply_key(u.key).items():
                    for k2, c2 in normal_word(node, [PL(k, u.obj)],
                                              obj=(self.H.apply_obj(self.source.left.src(u.key)), u.obj)).items():
                        formal_add(f, img, k2, f.mul(c, c2))
            elif isinstance(u, PR):
                img = normal_word(node, [PR(self.H.apply_obj(u.obj), u.key)])
            else:
                img = eps_multilinear(node, self.H.apply_key(u.first),
                                      [{g: f.one} for g in u.args])
            acc = img if acc is None else star_formal(node, img, acc)
        return acc


class TensorLeft(TwFunctor):
    """id (x) H: applies H to the right coordinate of a twisted product."""

    def __init__(self, left_node, H: TwFunctor):
        self.H = H
        self.source = ProdNode(left_node, H.source)
        self.target = ProdNode(left_node, H.target)

    def apply_obj(self, obj):
        return (obj[0], self.H.apply_obj(obj[1]))

    def apply_key(self, w: Word):
        node, f = self.target, self.target.field
        if not w.letters:
            return {Word((), self.apply_obj(w.obj)): f.one}
        acc = None
        for u in w.letters:
            if isinstance(u, PL):
                img = normal_word(node, [PL(u.key, self.H.apply_obj(u.obj))])
            elif isinstance(u, PR):
                img = {}
                for k, c in self.H.apply_key(u.key).items():
                    for k2, c2 in normal_word(node, [PR(u.obj, k)],
                                              obj=(u.obj, self.H.apply_obj(self.source.right.src(u.key)))).items():
                        formal_add(f, img, k2, f.mul(c, c2))
            else:
                img = eps_multilinear(node, {u.first: f.one},
                                      [self.H.apply_key(g) for g in u.args],
                                      right_obj=self.H.apply_obj(
                                          self.source.right.src(u.args[0])))
            acc = img if acc is None else star_formal(node, img, acc)
        return acc


class Associator(TwFunctor):
    """The one-sided associator (C (x) D) (x) E -> C (x) (D (x) E).

    It is the identity on objects; on letters it rebrackets pure tensors,
    pushes identities inside eps arguments, and expands nested eps letters
    into the insertion sum with bar-weight Koszul signs.
    """

    def __init__(self, C, D, E):
        self.C, self.D, self.E = C, D, E
        self.CD = ProdNode(C, D)
        self.DE = ProdNode(D, E)
        self.source = ProdNode(self.CD, E)
        self.target = ProdNode(C, self.DE)

    def apply_obj(self, obj):
        (c, d), e = obj
        return (c, (d, e))

    def apply_key(self, w: Word):
        node, f = self.target, self.target.field
        if not w.letters:
            return {Word((), self.apply_obj(w.obj)): f.one}
        acc = None
        for u in w.letters:
            img = self._letter(u)
            acc = img if acc is None else star_formal(node, img, acc)
        return acc

    def _letter(self, u):
        node, f = self.target, self.target.field
        if isinstance(u, PL):
            # u.key is a word of C (x) D, u.obj an object of E
            return self._pl_word(u.key, u.obj)
        if isinstance(u, PR):
            (c, d) = u.obj
            inner = normal_word(self.DE, [PR(d, u.key)])
            return self._wrap_right(c, inner)
        # eps over the product first factor: the first slot is a normal word
        # of C (x) D; multi-letter first slots were split away by make_eps,
        # so handle a single letter
        first = u.first
        if len(first) != 1:
            expanded = make_eps(self.source, first, list(u.args))
            out = {}
            for w2, c2 in expanded.items():
                for k, c in self.apply_key(w2).items():
                    formal_add(f, out, k, f.mul(c2, c))
            return out
        v = first.letters[0]
        if isinstance(v, PL):
            # eps(f (x) id_Y; h...) = eps(f; id_Y (x) h ...)
            Y = v.obj
            args = []
            for h in u.args:
                arg_fs = normal_word(self.DE, [PR(Y, h)])
                args.append(arg_fs)
            return eps_multilinear(node, {v.key: f.one},
                                   [{k: c for k, c in a.items()} for a in args])
        if isinstance(v, PR):
            # eps(id_X (x) g; h...) = id_X (x) eps(g; h...)
            X = v.obj
            inner = make_eps(self.DE, v.key, list(u.args))
            return self._wrap_right(X, inner)
        # nested eps: the insertion sum
        return self._nested(v, u.args)

    def _pl_word(self, w_cd: Word, Z):
        node, f = self.target, self.target.field
        if not w_cd.letters:
            return {Word((), self.apply_obj((w_cd.obj, Z))): f.one}
        acc = None
        for v in w_cd.letters:
            if isinstance(v, PL):
                img = normal_word(node, [PL(v.key, (v.obj, Z))])
            elif isinstance(v, PR):
                inner = normal_word(self.DE, [PL(v.key, Z)])
                img = self._wrap_right(v.obj, inner)
            else:
                args = [normal_word(self.DE, [PL(g, Z)]) for g in v.args]
                img = eps_multilinear(node, {v.first: f.one}, args)
            acc = img if acc is None else star_formal(node, img, acc)
        return acc

    def _wrap_right(self, c_obj, inner_fs):
        node, f = self.target, self.target.field
        out = {}
        for w2, c2 in inner_fs.items():
            if not w2.letters:
                formal_add(f, out, Word((), (c_obj, w2.obj)), c2)
                continue
            for k, c in normal_word(node, [PR(c_obj, w2)]).items():
                formal_add(f, out, k, f.mul(c2, c))
        return out

    def _nested(self, v: EPS, hs):
        """alpha(eps(eps(f; g_1..g_k); h_1..h_N)): insertion sum."""
        node, f = self.target, self.target.field
        fkey, gs = v.first, list(v.args)
        hs = list(hs)
        k, N = len(gs), len(hs)
        gbar = [self.D.deg(g) - 1 for g in gs]
        hbar = [self.E.deg(h) - 1 for h in hs]
        hpre = [0] * (N + 1)
        for i in range(N):
            hpre[i + 1] = hpre[i] + hbar[i]
        d_objs = [self.D.src(gs[0])] + [self.D.tgt(g) for g in gs]
        out = {}
        for bounds in _nested_intervals(k, N):
            exponent = sum(gbar[p] * hpre[i] for p, (i, _) in enumerate(bounds))
            sign = f.of(-1 if exponent % 2 else 1)
            args = []
            cursor = 0
            level = 0
            ok = True
            for p, (i, j) in enumerate(bounds):
                for q in range(cursor, i):
                    args.append(normal_word(self.DE, [PR(d_objs[level], hs[q])]))
                if j == i:
                    anchor = (self.E.src(hs[i]) if i < N
                              else self.E.tgt(hs[N - 1]) if N
                              else None)
                    args.append(normal_word(self.DE, [PL(gs[p], anchor)]))
                else:
                    inner = make_eps(self.DE, gs[p], hs[i:j])
                    if not inner:
                        ok = False
                        break
                    args.append(inner)
                cursor = j
                level = p + 1
            if not ok:
                continue
            for q in range(cursor, N):
                args.append(normal_word(self.DE, [PR(d_objs[level], hs[q])]))
            term = eps_multilinear(node, {fkey: f.one}, args)
            for w2, c in term.items():
                formal_add(f, out, w2, f.mul(sign, c))
        return out


def _nested_intervals(m, n):
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


class ComposedFunctor(TwFunctor):
    def __init__(self, outer: TwFunctor, inner: TwFunctor):
        self.outer, self.inner = outer, inner
        self.source = inner.source
        self.target = outer.target

    def apply_obj(self, obj):
        return self.outer.apply_obj(self.inner.apply_obj(obj))

    def apply_key(self, key):
        return self.outer.apply(self.inner.apply_key(key))


class CollapseUnit(TwFunctor):
    """Collapse a unit-category factor: C (x) 1 -> C or 1 (x) C -> C.

    In normal form the surviving letters are all on the non-unit side, so
    the collapse just strips them and composes.
    """

    def __init__(self, node: ProdNode, side):
        self.side = side  # "right": C (x) 1 -> C; "left": 1 (x) C -> C
        self.source = node
        self.target = node.left if side == "right" else node.right

    def apply_obj(self, obj):
        return obj[0] if self.side == "right" else obj[1]

    def apply_key(self, w: Word):
        f = self.target.field
        if not w.letters:
            key = (self.target.unit(self.apply_obj(w.obj))
                   if isinstance(self.target, BaseNode)
                   else self.target.unit(self.apply_obj(w.obj)))
            return {key: f.one}
        acc = None
        for u in w.letters:
            if self.side == "right":
                if not isinstance(u, PL):
                    raise ValueError("unit-side letter survived normalization")
                img = {u.key: f.one}
            else:
                if not isinstance(u, PR):
                    raise ValueError("unit-side letter survived normalization")
                img = {u.key: f.one}
            if acc is None:
                acc = img
            else:
                out = {}
                for k1, c1 in acc.items():
                    for k2, c2 in img.items():
                        for k, c in self.target.compose(k2, k1).items():
                            formal_add(f, out, k, f.mul(f.mul(c1, c2), c))
                acc = out
        return acc
