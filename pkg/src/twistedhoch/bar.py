"""The truncated tensor coalgebra on the shifted carrier of a brace
structure, with the coderivation induced by the differential and the cup
product and the coalgebra-map product induced by the braces.

Words are tuples of carrier basis labels; the weight of a letter is
||v|| = deg(v) - 1 and prefix Koszul signs accumulate from the left.  The
verifier checks, exactly and with no tolerance:

  * the coderivation squares to zero,
  * the product is a coalgebra map for the deconcatenation coproduct,
  * the coderivation is a derivation of the product,
  * the product is associative.

The induced product's single-letter component is the brace table and its
multi-letter components are interleavings, so a single flipped sign in any
cup or brace entry breaks at least one of the four checks with a short
witness word.
"""

from __future__ import annotations

import itertools

from .brace import BraceStructure
from .reports import ValidationReport


class BarCoalgebra:
    """Machinery over words in carrier basis labels, all operations exact."""

    def __init__(self, b: BraceStructure, length_bound: int):
        self.b = b
        self.field = b.field
        self.length_bound = length_bound

    # -- elements: dict word-tuple -> scalar -------------------------------
    def weight(self, label):
        return self.b.degree(label) - 1

    def word_weight(self, word):
        return sum(self.weight(l) for l in word)

    def add_into(self, acc, word, coeff):
        f = self.field
        cur = f.add(acc.get(word, f.zero), coeff)
        if f.is_zero(cur):
            acc.pop(word, None)
        else:
            acc[word] = cur

    def words(self, max_len=None):
        max_len = self.length_bound if max_len is None else max_len
        basis = self.b.basis()
        for n in range(1, max_len + 1):
            for w in itertools.product(basis, repeat=n):
                yield w

    # -- structure maps ----------------------------------------------------
    def _letter_elem(self, elem, rest_builder, acc, coeff):
        for lab, c in elem.items():
            self.add_into(acc, rest_builder(lab), self.field.mul(coeff, c))

    def coderivation(self, word_elem):
        """Lift of p_1 = d (letters) and p_2 = cup (adjacent merges)."""
        f = self.field
        out = {}
        for word, coeff in word_elem.items():
            n = len(word)
            prefix = 0
            for i in range(n):
                sign = f.of(-1 if prefix % 2 else 1)
                dv = self.b.d({word[i]: f.one})
                # suspended letter differential: -<dv>
                for lab, c in dv.items():
                    w2 = word[:i] + (lab,) + word[i + 1:]
                    self.add_into(out, w2, f.mul(f.mul(coeff, sign), f.neg(c)))
                if i + 1 < n:
                    # suspended merge of (w_i, w_{i+1}): (-1)^||w_i|| <cup(w_{i+1}, w_i)>
                    merged = self.b.cup({word[i + 1]: f.one}, {word[i]: f.one})
                    msign = f.of(-1 if self.weight(word[i]) % 2 else 1)
                    for lab, c in merged.items():
                        w2 = word[:i] + (lab,) + word[i + 2:]
                        self.add_into(out, w2,
                                      f.mul(f.mul(coeff, sign), f.mul(msign, c)))
                prefix += self.weight(word[i])
        return out

    def product(self, left_elem, right_elem):
        """Coalgebra-map product: letters of the left word swallow
        consecutive blocks of the right word via braces, in order."""
        f = self.field
        out = {}
        for lw, lc in left_elem.items():
            for rw, rc in right_elem.items():
                self._product_words(lw, rw, f.mul(lc, rc), out)
        return out

    def _product_words(self, xs, ys, coeff, out):
        f = self.field
        m, n = len(xs), len(ys)
        ybar = [self.weight(y) for y in ys]
        ypre = [0] * (n + 1)
        for i in range(n):
            ypre[i + 1] = ypre[i] + ybar[i]
        # choose 0 <= i_1 <= j_1 <= ... <= i_m <= j_m <= n: x_p swallows
        # ys[i_p:j_p]; pass-through ys stay as letters.
        for bounds in _interleavings(m, n):
            exponent = 0
            pieces = []
            cursor = 0
            ok = True
            for p, (i, j) in enumerate(bounds):
                exponent += self.weight(xs[p]) * ypre[i]
                for q in range(cursor, i):
                    pieces.append({ys[q]: f.one})
                if j == i:
                    pieces.append({xs[p]: f.one})
                else:
                    inner = self.b.brace({xs[p]: f.one},
                                         [{ys[q]: f.one} for q in range(i, j)])
                    if not inner:
                        ok = False
                        break
                    pieces.append(inner)
                cursor = j
            if not ok:
                continue
            for q in range(cursor, n):
                pieces.append({ys[q]: f.one})
            sign = f.of(-1 if exponent % 2 else 1)
            base = f.mul(coeff, sign)
            for combo in itertools.product(*[list(p.items()) for p in pieces]):
                c = base
                for _, cc in combo:
                    c = f.mul(c, cc)
                self.add_into(out, tuple(l for l, _ in combo), c)

    def coproduct(self, word_elem):
        """Deconcatenation into proper splits: dict (w1, w2) -> scalar."""
        out = {}
        f = self.field
        for word, coeff in word_elem.items():
            for k in range(1, len(word)):
                key = (word[:k], word[k:])
                cur = f.add(out.get(key, f.zero), coeff)
                if f.is_zero(cur):
                    out.pop(key, None)
                else:
                    out[key] = cur
        return out


def _interleavings(m, n):
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


def bar_bialgebra_check(b: BraceStructure, length_bound: int,
                        labels=None, max_failures=5) -> ValidationReport:
    """Verify the dg-bialgebra axioms on the truncated tensor coalgebra.

    All intermediate values are computed exactly (beyond the bound where
    needed), and inputs range over words of total length <= length_bound in
    the given labels (default: the full carrier basis).
    """
    rep = ValidationReport("bar bialgebra")
    rep.meta["length_bound"] = length_bound
    bar = BarCoalgebra(b, length_bound)
    f = b.field
    basis = labels if labels is not None else b.basis()

    def words_up_to(total):
        for n in range(1, total + 1):
            yield from itertools.product(basis, repeat=n)

    one = f.one

    failures = []
    total = 0
    for w in words_up_to(length_bound):
        total += 1
        dd = bar.coderivation(bar.coderivation({w: one}))
        if dd:
            failures.append(f"D(D({w})) != 0: {sorted(dd)[:2]}")
            if len(failures) >= max_failures:
                break
    rep.tally("coderivation squares to zero", total, failures)

    failures = []
    total = 0
    for la in range(1, length_bound):
        for lb in range(1, length_bound - la + 1):
            for wa in itertools.product(basis, repeat=la):
                for wb in itertools.product(basis, repeat=lb):
                    total += 1
                    prod = bar.product({wa: one}, {wb: one})
                    lhs = bar.coproduct(prod)
                    rhs = {}
                    # (product x product) . middle swap . (coproduct x coproduct),
                    # with the primitive parts of the coproduct included.
                    splits_a = [((), wa), (wa, ())] + [s for s in (
                        (wa[:k], wa[k:]) for k in range(1, la))]
                    splits_b = [((), wb), (wb, ())] + [s for s in (
                        (wb[:k], wb[k:]) for k in range(1, lb))]
                    for a1, a2 in splits_a:
                        for b1, b2 in splits_b:
                            if (not a1 and not b1) or (not a2 and not b2):
                                continue
                            swap = bar.word_weight(a2) * bar.word_weight(b1)
                            sgn = f.of(-1 if swap % 2 else 1)
                            p1 = (bar.product({a1: one}, {b1: one}) if a1 and b1
                                  else {a1 or b1: one})
                            p2 = (bar.product({a2: one}, {b2: one}) if a2 and b2
                                  else {a2 or b2: one})
                            for w1, c1 in p1.items():
                                for w2, c2 in p2.items():
                                    key = (w1, w2)
                                    cur = f.add(rhs.get(key, f.zero),
                                                f.mul(sgn, f.mul(c1, c2)))
                                    if f.is_zero(cur):
                                        rhs.pop(key, None)
                                    else:
                                        rhs[key] = cur
                    if lhs != rhs:
                        failures.append(f"coalgebra map fails on {wa} * {wb}")
                    if len(failures) >= max_failures:
                        break
                if len(failures) >= max_failures:
                    break
            if len(failures) >= max_failures:
                break
        if len(failures) >= max_failures:
            break
    rep.tally("product is a coalgebra map", total, failures)

    failures = []
    total = 0
    for la in range(1, length_bound):
        for lb in range(1, length_bound - la + 1):
            for wa in itertools.product(basis, repeat=la):
                for wb in itertools.product(basis, repeat=lb):
                    total += 1
                    lhs = bar.coderivation(bar.product({wa: one}, {wb: one}))
                    sgn = f.of(-1 if bar.word_weight(wa) % 2 else 1)
                    rhs = bar.product(bar.coderivation({wa: one}), {wb: one})
                    for w, c in bar.product({wa: one},
                                            bar.coderivation({wb: one})).items():
                        cur = f.add(rhs.get(w, f.zero), f.mul(sgn, c))
                        if f.is_zero(cur):
                            rhs.pop(w, None)
                        else:
                            rhs[w] = cur
                    if lhs != rhs:
                        failures.append(f"derivation fails on {wa} * {wb}")
                    if len(failures) >= max_failures:
                        break
                if len(failures) >= max_failures:
                    break
            if len(failures) >= max_failures:
                break
        if len(failures) >= max_failures:
            break
    rep.tally("coderivation is a product derivation", total, failures)

    failures = []
    total = 0
    for la in range(1, length_bound - 1):
        for lb in range(1, length_bound - la):
            for lc in range(1, length_bound - la - lb + 1):
                for wa in itertools.product(basis, repeat=la):
                    for wb in itertools.product(basis, repeat=lb):
                        for wc in itertools.product(basis, repeat=lc):
                            total += 1
                            lhs = bar.product(bar.product({wa: 1 and one}, {wb: one}),
                                              {wc: one})
                            rhs = bar.product({wa: one},
                                              bar.product({wb: one}, {wc: one}))
                            if lhs != rhs:
                                failures.append(
                                    f"associativity fails on {wa},{wb},{wc}")
                            if len(failures) >= max_failures:
                                break
                        if len(failures) >= max_failures:
                            break
                    if len(failures) >= max_failures:
                        break
                if len(failures) >= max_failures:
                    break
            if len(failures) >= max_failures:
                break
        if len(failures) >= max_failures:
            break
    rep.tally("product associativity", total, failures)

    return rep
