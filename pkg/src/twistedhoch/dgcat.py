"""Finite dg categories, dg functors, dg bimodules, and their validators.

A DgCategory stores a global registry of basis morphisms (label, source,
target, degree, unit flag), sparse composition structure constants, and a
sparse differential.  Units are designated basis elements; their products
are implied and need not appear in the table.  A one-object category is a
dg algebra.

Elements of hom spaces are sparse dicts {label: scalar} over the category's
ground field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex, GradedModule, elem_add, elem_scale
from .fields import check_same_field
from .reports import ValidationReport


@dataclass(frozen=True)
class MorInfo:
    label: str
    source: str
    target: str
    degree: int
    is_unit: bool = False


class DgCategory:
    def __init__(self, field, objects, morphisms, units, compose=None,
                 differential=None, name="dgcat", check=True):
        self.field = field
        self.name = name
        self.objects = list(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object labels")
        self.mor = {}
        for m in morphisms:
            info = m if isinstance(m, MorInfo) else MorInfo(*m)
            if info.label in self.mor:
                raise ValueError(f"duplicate morphism label {info.label!r}")
            if info.source not in self.objects or info.target not in self.objects:
                raise ValueError(f"morphism {info.label!r} has unknown endpoints")
            self.mor[info.label] = info
        self.units = dict(units)
        for obj, label in self.units.items():
            info = self.mor.get(label)
            if info is None or info.source != obj or info.target != obj or info.degree != 0:
                raise ValueError(f"unit of {obj!r} must be a degree-0 endo basis element")
            self.mor[label] = MorInfo(label, obj, obj, 0, True)
        if set(self.units) != set(self.objects):
            raise ValueError("every object needs a designated unit")

        f = field
        self.compose_table = {}
        for (g, h), elem in (compose or {}).items():
            if g not in self.mor or h not in self.mor:
                raise ValueError(f"composition entry on unknown labels ({g},{h})")
            clean = {k: f.of(v) for k, v in elem.items() if not f.is_zero(f.of(v))}
            if clean:
                self.compose_table[(g, h)] = clean
        self.diff = {}
        for label, elem in (differential or {}).items():
            clean = {k: f.of(v) for k, v in elem.items() if not f.is_zero(f.of(v))}
            if clean:
                self.diff[label] = clean
        if check:
            report = validate_dg_category(self)
            if not report.passed:
                raise ValueError("invalid dg category: " + "; ".join(
                    c.witness or c.name for c in report.failures()))

    # -- registry helpers -------------------------------------------------
    def degree(self, label):
        return self.mor[label].degree

    def source(self, label):
        return self.mor[label].source

    def target(self, label):
        return self.mor[label].target

    def is_unit(self, label):
        return self.mor[label].is_unit

    def unit(self, obj):
        return self.units[obj]

    def hom_basis(self, x, y):
        return sorted(l for l, i in self.mor.items() if i.source == x and i.target == y)

    def nonunit_basis(self):
        return sorted(l for l, i in self.mor.items() if not i.is_unit)

    def hom_complex_of(self, x, y) -> Complex:
        basis = [(l, self.mor[l].degree) for l in self.hom_basis(x, y)]
        module = GradedModule(basis)
        diff = {l: img for l, img in self.diff.items() if l in module.degree_of}
        return Complex(self.field, module, diff, check=False)

    def element_degree(self, elem):
        degs = {self.mor[l].degree for l in elem}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop()

    # -- structure maps ---------------------------------------------------
    def compose_labels(self, g, f):
        """g . f for basis labels, g applied after f."""
        gi, fi = self.mor[g], self.mor[f]
        if gi.source != fi.target:
            raise ValueError(f"non-composable pair ({g},{f})")
        if gi.is_unit:
            return {f: self.field.one}
        if fi.is_unit:
            return {g: self.field.one}
        return dict(self.compose_table.get((g, f), {}))

    def compose(self, gelem, felem):
        """Bilinear extension of composition to elements."""
        fd = self.field
        out = {}
        for g, cg in gelem.items():
            for f, cf in felem.items():
                out = elem_add(fd, out, elem_scale(fd, fd.mul(cg, cf), self.compose_labels(g, f)))
        return out

    def d_label(self, label):
        return dict(self.diff.get(label, {}))

    def d(self, elem):
        fd = self.field
        out = {}
        for label, c in elem.items():
            out = elem_add(fd, out, elem_scale(fd, c, self.diff.get(label, {})))
        return out

    def nonunit_degree_bounds(self):
        """(min, max) degree over non-unit basis morphisms, None if none."""
        degs = [i.degree for i in self.mor.values() if not i.is_unit]
        if not degs:
            return None
        return min(degs), max(degs)


def validate_dg_category(cat: DgCategory) -> ValidationReport:
    """Check all dg category axioms on every basis tuple, exactly."""
    rep = ValidationReport(f"dg category {cat.name}")
    f = cat.field

    failures = []
    total = 0
    for label, img in cat.diff.items():
        total += 1
        info = cat.mor[label]
        if info.is_unit and img:
            failures.append(f"d({label}) != 0 on a unit")
            continue
        for k in img:
            ki = cat.mor[k]
            if (ki.source, ki.target) != (info.source, info.target):
                failures.append(f"d({label}) component {k} changes endpoints")
            if ki.degree != info.degree + 1:
                failures.append(f"d({label}) component {k} has wrong degree")
    rep.tally("differential well-typed", total, failures)

    failures = []
    for label in cat.mor:
        if cat.d(cat.d_label(label)):
            failures.append(f"d(d({label})) != 0")
    rep.tally("d.d = 0", len(cat.mor), failures)

    failures = []
    for (g, h), elem in cat.compose_table.items():
        gi, hi = cat.mor[g], cat.mor[h]
        if gi.source != hi.target:
            failures.append(f"table entry ({g},{h}) is not composable")
            continue
        if gi.is_unit or hi.is_unit:
            expect = {h if gi.is_unit else g: f.one}
            if elem != expect:
                failures.append(f"unit product ({g},{h}) disagrees with unit law")
            continue
        for k in elem:
            ki = cat.mor[k]
            if (ki.source, ki.target) != (hi.source, gi.target):
                failures.append(f"({g},{h}) component {k} has wrong endpoints")
            if ki.degree != gi.degree + hi.degree:
                failures.append(f"({g},{h}) component {k} has wrong degree")
    rep.tally("composition well-typed", len(cat.compose_table), failures)

    labels = list(cat.mor)
    failures = []
    total = 0
    for g in labels:
        for h in labels:
            if cat.mor[g].source != cat.mor[h].target:
                continue
            for k in labels:
                if cat.mor[h].source != cat.mor[k].target:
                    continue
                total += 1
                left = cat.compose(cat.compose_labels(g, h), {k: f.one})
                right = cat.compose({g: f.one}, cat.compose_labels(h, k))
                if left != right:
                    failures.append(f"associativity fails on ({g},{h},{k}): {left} != {right}")
    rep.tally("associativity", total, failures)

    failures = []
    total = 0
    for g in labels:
        for h in labels:
            gi, hi = cat.mor[g], cat.mor[h]
            if gi.source != hi.target:
                continue
            total += 1
            gh = cat.compose_labels(g, h)
            lhs = cat.d(gh)
            sign = f.of(-1 if gi.degree % 2 else 1)
            rhs = elem_add(f, cat.compose(cat.d_label(g), {h: f.one}),
                           elem_scale(f, sign, cat.compose({g: f.one}, cat.d_label(h))))
            if lhs != rhs:
                failures.append(f"Leibniz fails on ({g},{h}): {lhs} != {rhs}")
    rep.tally("graded Leibniz", total, failures)

    return rep


class DgFunctor:
    def __init__(self, source: DgCategory, target: DgCategory, object_map,
                 morphism_map, name="F", check=True):
        check_same_field(source.field, target.field)
        self.source = source
        self.target = target
        self.name = name
        self.object_map = dict(object_map)
        f = target.field
        self.morphism_map = {}
        for label, elem in morphism_map.items():
            clean = {k: f.of(v) for k, v in elem.items() if not f.is_zero(f.of(v))}
            self.morphism_map[label] = clean
        for obj, unit in source.units.items():
            self.morphism_map.setdefault(unit, {target.unit(self.object_map[obj]): f.one})
        if check:
            rep = validate_dg_functor(self)
            if not rep.passed:
                raise ValueError("invalid dg functor: " + "; ".join(
                    c.witness or c.name for c in rep.failures()))

    def on_object(self, obj):
        return self.object_map[obj]

    def on_label(self, label):
        return dict(self.morphism_map.get(label, {}))

    def on_element(self, elem):
        f = self.target.field
        out = {}
        for label, c in elem.items():
            out = elem_add(f, out, elem_scale(f, c, self.on_label(label)))
        return out


def identity_functor(cat: DgCategory) -> DgFunctor:
    return DgFunctor(cat, cat, {o: o for o in cat.objects},
                     {l: {l: cat.field.one} for l in cat.mor},
                     name="id", check=False)


def validate_dg_functor(fun: DgFunctor) -> ValidationReport:
    rep = ValidationReport(f"dg functor {fun.name}")
    src, tgt, f = fun.source, fun.target, fun.target.field

    failures = []
    for obj in src.objects:
        if fun.object_map.get(obj) not in tgt.objects:
            failures.append(f"object {obj!r} not mapped into the target")
    rep.tally("object map", len(src.objects), failures)

    failures = []
    for label, info in src.mor.items():
        img = fun.on_label(label)
        fx, fy = fun.object_map[info.source], fun.object_map[info.target]
        for k in img:
            ki = tgt.mor[k]
            if (ki.source, ki.target) != (fx, fy) or ki.degree != info.degree:
                failures.append(f"F({label}) component {k} has wrong type")
    rep.tally("degree-0 typed on homs", len(src.mor), failures)

    failures = []
    for obj, unit in src.units.items():
        if fun.on_label(unit) != {tgt.unit(fun.object_map[obj]): f.one}:
            failures.append(f"F(unit of {obj!r}) is not the unit")
    rep.tally("units preserved", len(src.units), failures)

    failures = []
    total = 0
    for g, gi in src.mor.items():
        for h, hi in src.mor.items():
            if gi.source != hi.target:
                continue
            total += 1
            lhs = fun.on_element(src.compose_labels(g, h))
            rhs = tgt.compose(fun.on_label(g), fun.on_label(h))
            if lhs != rhs:
                failures.append(f"F(g.h) != F(g).F(h) on ({g},{h})")
    rep.tally("composition preserved", total, failures)

    failures = []
    for label in src.mor:
        if fun.on_element(src.d_label(label)) != tgt.d(fun.on_label(label)):
            failures.append(f"F(d {label}) != d F({label})")
    rep.tally("differentials preserved", len(src.mor), failures)

    return rep


class DgBimodule:
    """A dg bimodule over a DgCategory.

    Basis values carry a (source, target) object pair; the left action
    composes with morphisms on the target side, the right action on the
    source side.  Unit actions are implied.
    """

    def __init__(self, cat: DgCategory, values, left, right, differential=None,
                 name="M", check=True):
        self.cat = cat
        self.field = cat.field
        self.name = name
        self.val = {}
        for v in values:
            info = v if isinstance(v, MorInfo) else MorInfo(*v)
            if info.label in self.val:
                raise ValueError(f"duplicate value label {info.label!r}")
            self.val[info.label] = info
        f = self.field
        self.left_table = {(g, m): self._clean(e) for (g, m), e in left.items()}
        self.right_table = {(m, g): self._clean(e) for (m, g), e in right.items()}
        self.diff = {}
        for label, elem in (differential or {}).items():
            clean = self._clean(elem)
            if clean:
                self.diff[label] = clean
        if check:
            rep = validate_dg_bimodule(self)
            if not rep.passed:
                raise ValueError("invalid dg bimodule: " + "; ".join(
                    c.witness or c.name for c in rep.failures()))

    def _clean(self, elem):
        f = self.field
        return {k: f.of(v) for k, v in elem.items() if not f.is_zero(f.of(v))}

    def degree(self, label):
        return self.val[label].degree

    def source(self, label):
        return self.val[label].source

    def target(self, label):
        return self.val[label].target

    def basis(self, x, y):
        return sorted(l for l, i in self.val.items() if i.source == x and i.target == y)

    def value_complex(self, x, y) -> Complex:
        module = GradedModule([(l, self.val[l].degree) for l in self.basis(x, y)])
        diff = {l: img for l, img in self.diff.items() if l in module.degree_of}
        return Complex(self.field, module, diff, check=False)

    def d_label(self, label):
        return dict(self.diff.get(label, {}))

    def d(self, elem):
        f = self.field
        out = {}
        for label, c in elem.items():
            out = elem_add(f, out, elem_scale(f, c, self.diff.get(label, {})))
        return out

    def left_label(self, g, m):
        """Action of the morphism g on the value m, on the target side."""
        if self.cat.is_unit(g):
            return {m: self.field.one}
        return dict(self.left_table.get((g, m), {}))

    def right_label(self, m, g):
        if self.cat.is_unit(g):
            return {m: self.field.one}
        return dict(self.right_table.get((m, g), {}))

    def left(self, gelem, melem):
        f = self.field
        out = {}
        for g, cg in gelem.items():
            for m, cm in melem.items():
                out = elem_add(f, out, elem_scale(f, f.mul(cg, cm), self.left_label(g, m)))
        return out

    def right(self, melem, gelem):
        f = self.field
        out = {}
        for m, cm in melem.items():
            for g, cg in gelem.items():
                out = elem_add(f, out, elem_scale(f, f.mul(cm, cg), self.right_label(m, g)))
        return out

    def degree_bounds(self):
        degs = [i.degree for i in self.val.values()]
        if not degs:
            return None
        return min(degs), max(degs)


def validate_dg_bimodule(bm: DgBimodule) -> ValidationReport:
    rep = ValidationReport(f"dg bimodule {bm.name}")
    cat, f = bm.cat, bm.field

    failures = []
    for label, img in bm.diff.items():
        info = bm.val[label]
        for k in img:
            ki = bm.val[k]
            if (ki.source, ki.target) != (info.source, info.target) or ki.degree != info.degree + 1:
                failures.append(f"d({label}) component {k} wrong type")
    for label in bm.val:
        if bm.d(bm.d_label(label)):
            failures.append(f"d(d({label})) != 0")
    rep.tally("value differential", len(bm.val), failures)

    def type_ok(result, src, tgt, deg):
        return all((bm.val[k].source, bm.val[k].target, bm.val[k].degree) == (src, tgt, deg)
                   for k in result)

    failures = []
    total = 0
    for g, gi in cat.mor.items():
        for m, mi in bm.val.items():
            if gi.source == mi.target:
                total += 1
                res = bm.left_label(g, m)
                if not type_ok(res, mi.source, gi.target, gi.degree + mi.degree):
                    failures.append(f"left action ({g},{m}) wrong type")
            if mi.source == gi.target:
                total += 1
                res = bm.right_label(m, g)
                if not type_ok(res, gi.source, mi.target, gi.degree + mi.degree):
                    failures.append(f"right action ({m},{g}) wrong type")
    rep.tally("actions well-typed", total, failures)

    failures = []
    total = 0
    labels = list(cat.mor)
    for m, mi in bm.val.items():
        for g in labels:
            gi = cat.mor[g]
            for h in labels:
                hi = cat.mor[h]
                if gi.source == hi.target and hi.source == mi.target:
                    total += 1
                    lhs = bm.left(cat.compose_labels(g, h), {m: f.one})
                    rhs = bm.left({g: f.one}, bm.left_label(h, m))
                    if lhs != rhs:
                        failures.append(f"left associativity fails on ({g},{h},{m})")
                if mi.source == gi.target and gi.source == hi.target:
                    total += 1
                    lhs = bm.right(bm.right_label(m, g), {h: f.one})
                    rhs = bm.right({m: f.one}, cat.compose_labels(g, h))
                    if lhs != rhs:
                        failures.append(f"right associativity fails on ({m},{g},{h})")
                if gi.source == mi.target and mi.source == hi.target:
                    total += 1
                    lhs = bm.left({g: f.one}, bm.right_label(m, h))
                    rhs = bm.right(bm.left_label(g, m), {h: f.one})
                    if lhs != rhs:
                        failures.append(f"actions do not commute on ({g},{m},{h})")
    rep.tally("action associativity and commutation", total, failures)

    failures = []
    total = 0
    for m, mi in bm.val.items():
        for g, gi in cat.mor.items():
            if gi.source == mi.target:
                total += 1
                lhs = bm.d(bm.left_label(g, m))
                sg = f.of(-1 if gi.degree % 2 else 1)
                rhs = elem_add(f, bm.left(cat.d_label(g), {m: f.one}),
                               elem_scale(f, sg, bm.left({g: f.one}, bm.d_label(m))))
                if lhs != rhs:
                    failures.append(f"left Leibniz fails on ({g},{m})")
            if mi.source == gi.target:
                total += 1
                lhs = bm.d(bm.right_label(m, g))
                sm = f.of(-1 if mi.degree % 2 else 1)
                rhs = elem_add(f, bm.right(bm.d_label(m), {g: f.one}),
                               elem_scale(f, sm, bm.right({m: f.one}, cat.d_label(g))))
                if lhs != rhs:
                    failures.append(f"right Leibniz fails on ({m},{g})")
    rep.tally("action Leibniz", total, failures)

    return rep


def _pair_label(e_label, x, y):
    return f"{e_label}[{x},{y}]"


def bimodule_from_functors(F: DgFunctor, G: DgFunctor) -> DgBimodule:
    """The coefficient bimodule (x, y) -> target_hom(F x, G y).

    The left action post-composes with G-images, the right action
    pre-composes with F-images.
    """
    if F.source is not G.source or F.target is not G.target:
        raise ValueError("functors must share source and target")
    D, E = F.source, F.target
    f = D.field

    values = []
    val_key = {}
    for x in D.objects:
        for y in D.objects:
            for e in E.hom_basis(F.on_object(x), G.on_object(y)):
                lab = _pair_label(e, x, y)
                values.append(MorInfo(lab, x, y, E.degree(e)))
                val_key[lab] = (e, x, y)

    def wrap(elem, x, y):
        return {_pair_label(k, x, y): v for k, v in elem.items()}

    diff = {}
    left = {}
    right = {}
    for lab, (e, x, y) in val_key.items():
        de = E.d_label(e)
        if de:
            diff[lab] = wrap(de, x, y)
    for lab, (e, x, y) in val_key.items():
        for g in D.mor:
            gi = D.mor[g]
            if gi.is_unit:
                continue
            if gi.source == y:
                res = E.compose(G.on_label(g), {e: f.one})
                if res:
                    left[(g, lab)] = wrap(res, x, gi.target)
            if gi.target == x:
                res = E.compose({e: f.one}, F.on_label(g))
                if res:
                    right[(lab, g)] = wrap(res, gi.source, y)

    return DgBimodule(D, values, left, right, diff,
                      name=f"M[{F.name},{G.name}]", check=False)


def diagonal_bimodule(cat: DgCategory) -> DgBimodule:
    idf = identity_functor(cat)
    bm = bimodule_from_functors(idf, idf)
    bm.name = f"{cat.name} diagonal"
    return bm


def free_dg_category(field, objects, arrows, max_word_length, d_gens=None,
                     name="free"):
    """Truncated free dg category on a graded quiver.

    arrows: iterable of (label, source, target, degree).  d_gens maps an
    arrow label to {path: coeff} where a path is a tuple of arrow labels in
    path order (first applied first).  Words longer than max_word_length are
    identified with zero; validation quantifies only over in-bound data.
    """
    arrows = [tuple(a) for a in arrows]
    arrow_info = {}
    for label, src, tgt, deg in arrows:
        if label in arrow_info:
            raise ValueError(f"duplicate arrow {label!r}")
        if src not in objects or tgt not in objects:
            raise ValueError(f"arrow {label!r} has unknown endpoints")
        arrow_info[label] = (src, tgt, deg)

    def path_src(path):
        return arrow_info[path[0]][0]

    def path_tgt(path):
        return arrow_info[path[-1]][1]

    def path_deg(path):
        return sum(arrow_info[a][2] for a in path)

    def path_label(path):
        return "*".join(reversed(path))

    # enumerate composable paths up to the bound
    paths = [(a,) for a in arrow_info]
    words = list(paths)
    while paths:
        nxt = []
        for p in paths:
            if len(p) >= max_word_length:
                continue
            for a, (src, _, _) in arrow_info.items():
                if src == path_tgt(p):
                    nxt.append(p + (a,))
        words.extend(nxt)
        paths = nxt

    morphisms = []
    units = {}
    for obj in objects:
        unit = f"id_{obj}"
        morphisms.append(MorInfo(unit, obj, obj, 0, True))
        units[obj] = unit
    label_of = {}
    for p in words:
        lab = path_label(p)
        label_of[p] = lab
        morphisms.append(MorInfo(lab, path_src(p), path_tgt(p), path_deg(p)))

    compose = {}
    for p in words:
        for q in words:
            if path_tgt(q) != path_src(p):
                continue
            joined = q + p
            entry = {label_of[joined]: field.one} if len(joined) <= max_word_length else {}
            compose[(label_of[p], label_of[q])] = entry

    d_gens = {k: dict(v) for k, v in (d_gens or {}).items()}
    for a, img in d_gens.items():
        for p in img:
            if path_deg(p) != arrow_info[a][2] + 1:
                raise ValueError(f"d({a}) component {p} has wrong degree")
            if (path_src(p), path_tgt(p)) != arrow_info[a][:2]:
                raise ValueError(f"d({a}) component {p} changes endpoints")

    def d_word(path):
        out = {}
        suffix_deg = 0
        for i in range(len(path) - 1, -1, -1):
            a = path[i]
            sign = field.of(-1 if suffix_deg % 2 else 1)
            for q, coeff in d_gens.get(a, {}).items():
                spliced = path[:i] + q + path[i + 1:]
                if len(spliced) <= max_word_length:
                    lab = label_of[spliced]
                    acc = field.add(out.get(lab, field.zero), field.mul(sign, field.of(coeff)))
                    if field.is_zero(acc):
                        out.pop(lab, None)
                    else:
                        out[lab] = acc
            suffix_deg += arrow_info[a][2]
        return out

    differential = {}
    for p in words:
        img = d_word(p)
        if img:
            differential[label_of[p]] = img

    return DgCategory(field, objects, morphisms, units, compose, differential,
                      name=name, check=True)
