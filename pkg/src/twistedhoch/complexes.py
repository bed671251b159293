"""Graded modules, cochain complexes, Koszul signs, tensor and hom complexes.

Conventions used throughout the package:

* cohomological grading, every differential raises degree by 1;
* d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy on tensor products;
* (d phi) = d_B . phi - (-1)^|phi| phi . d_A on hom complexes;
* all bases are ordered deterministically, by label within each degree.

Elements of a graded module are sparse dicts {label: scalar}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import check_same_field
from .linalg import SparseMatrix, SpanTracker, extend_basis, rank_kernel_image


def koszul_sign(perm, degrees):
    """Sign of reordering graded symbols by ``perm``.

    ``perm`` is a permutation of range(k): the reordered tuple is
    (x_perm[0], ..., x_perm[k-1]) where x_i has degree degrees[i].  Each
    inverted pair contributes (-1)^(product of the two degrees), so the map
    perm -> sign is multiplicative and an adjacent swap of degrees p, q
    gives (-1)^(p*q).
    """
    if len(perm) != len(degrees):
        raise ValueError("permutation and degree list must have equal length")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation")
    exponent = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                exponent += degrees[perm[i]] * degrees[perm[j]]
    return -1 if exponent % 2 else 1


class GradedModule:
    """A finite based graded vector space: labels with integer degrees."""

    def __init__(self, basis):
        self.degree_of = {}
        for label, deg in basis:
            if label in self.degree_of:
                raise ValueError(f"duplicate basis label {label!r}")
            self.degree_of[label] = deg
        by_degree = {}
        for label, deg in basis:
            by_degree.setdefault(deg, []).append(label)
        self.basis_by_degree = {d: sorted(ls) for d, ls in by_degree.items()}
        self.labels = [l for d in sorted(self.basis_by_degree) for l in self.basis_by_degree[d]]

    @property
    def dim(self):
        return len(self.labels)

    def degrees(self):
        return sorted(self.basis_by_degree)

    def dim_in_degree(self, n):
        return len(self.basis_by_degree.get(n, ()))

    def basis_in_degree(self, n):
        return list(self.basis_by_degree.get(n, ()))

    def element_degree(self, elem):
        """Degree of a homogeneous element, None for 0, error if mixed."""
        degs = {self.degree_of[l] for l in elem}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element not homogeneous: degrees {sorted(degs)}")
        return degs.pop()


def elem_add(field, a, b):
    out = dict(a)
    for k, v in b.items():
        acc = field.add(out.get(k, field.zero), v)
        if field.is_zero(acc):
            out.pop(k, None)
        else:
            out[k] = acc
    return out


def elem_scale(field, c, a):
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, v) for k, v in a.items()}


def elem_sub(field, a, b):
    return elem_add(field, a, elem_scale(field, field.neg(field.one), b))


class Complex:
    """A cochain complex on a GradedModule.

    The differential is stored per basis label, as the (sparse) image
    element; d.d = 0 is validated at construction, exactly.
    """

    def __init__(self, field, module: GradedModule, differential=None, check=True):
        self.field = field
        self.module = module
        diff = {}
        for label, image in (differential or {}).items():
            if label not in module.degree_of:
                raise ValueError(f"differential on unknown label {label!r}")
            img = {k: field.of(v) for k, v in image.items() if not field.is_zero(field.of(v))}
            for k in img:
                if module.degree_of[k] != module.degree_of[label] + 1:
                    raise ValueError(f"d({label}) has component {k} of wrong degree")
            if img:
                diff[label] = img
        self.diff = diff
        if check:
            self.assert_d_squared_zero()

    def d_label(self, label):
        return dict(self.diff.get(label, {}))

    def d(self, elem):
        f = self.field
        out = {}
        for label, c in elem.items():
            out = elem_add(f, out, elem_scale(f, c, self.diff.get(label, {})))
        return out

    def assert_d_squared_zero(self):
        for label in self.module.labels:
            dd = self.d(self.d_label(label))
            if dd:
                raise ValueError(f"d.d != 0 on basis element {label!r}: {dd}")

    def differential_matrix(self, n) -> SparseMatrix:
        dom = self.module.basis_in_degree(n)
        cod = self.module.basis_in_degree(n + 1)
        cod_index = {l: i for i, l in enumerate(cod)}
        entries = {}
        for j, label in enumerate(dom):
            for k, v in self.diff.get(label, {}).items():
                entries[(cod_index[k], j)] = v
        return SparseMatrix(len(cod), len(dom), self.field, entries)


def cohomology_at(cx: Complex, n: int):
    """(dimension, representative cocycles) of H^n.

    Representatives are elements (sparse label dicts) that are exact cocycles
    and project to a basis of kernel/image.
    """
    dom = cx.module.basis_in_degree(n)
    d_out = cx.differential_matrix(n)
    _, kernel, _ = rank_kernel_image(d_out)

    d_in = cx.differential_matrix(n - 1)
    rank_in, _, image = rank_kernel_image(d_in)
    dim = len(kernel) - rank_in

    chosen = extend_basis(image, kernel, cx.field)
    reps = []
    for i in chosen:
        reps.append({dom[j]: c for j, c in sorted(kernel[i].items())})
    if len(reps) != dim:
        raise AssertionError("representative count disagrees with dimension")
    return dim, reps


def unit_complex(field, label="1"):
    """The ground field as a complex concentrated in degree 0."""
    return Complex(field, GradedModule([(label, 0)]))


def tensor_complex(a: Complex, b: Complex) -> Complex:
    """Tensor product complex; labels are "la(x)lb"."""
    check_same_field(a.field, b.field)
    f = a.field
    basis = []
    for la in a.module.labels:
        for lb in b.module.labels:
            basis.append((f"{la}(x){lb}", a.module.degree_of[la] + b.module.degree_of[lb]))
    module = GradedModule(basis)
    diff = {}
    for la in a.module.labels:
        for lb in b.module.labels:
            img = {}
            for k, v in a.diff.get(la, {}).items():
                img[f"{k}(x){lb}"] = v
            sign = -1 if a.module.degree_of[la] % 2 else 1
            for k, v in b.diff.get(lb, {}).items():
                img = elem_add(f, img, {f"{la}(x){k}": f.mul(f.of(sign), v)})
            if img:
                diff[f"{la}(x){lb}"] = img
    return Complex(f, module, diff)


def hom_complex(a: Complex, b: Complex) -> Complex:
    """Internal hom complex; the basis map la -> lb is labelled "la->lb"."""
    check_same_field(a.field, b.field)
    f = a.field
    basis = []
    for la in a.module.labels:
        for lb in b.module.labels:
            basis.append((f"{la}->{lb}", b.module.degree_of[lb] - a.module.degree_of[la]))
    module = GradedModule(basis)

    # transpose of d_a: which la' have la in their image, with what coefficient
    into = {}
    for la2, img in a.diff.items():
        for k, v in img.items():
            into.setdefault(k, []).append((la2, v))

    diff = {}
    for la in a.module.labels:
        for lb in b.module.labels:
            n = b.module.degree_of[lb] - a.module.degree_of[la]
            img = {}
            for k, v in b.diff.get(lb, {}).items():
                img[f"{la}->{k}"] = v
            sign = f.of(1 if n % 2 else -1)  # the -(-1)^n phi.d_A term
            for la2, v in into.get(la, ()):
                img = elem_add(f, img, {f"{la2}->{lb}": f.mul(sign, v)})
            if img:
                diff[f"{la}->{lb}"] = img
    return Complex(f, module, diff)


def complexes_isomorphic_by_labels(a: Complex, b: Complex, relabel) -> bool:
    """Label-preserving comparison: does la -> relabel(la) carry a onto b?"""
    if sorted(map(relabel, a.module.labels)) != sorted(b.module.labels):
        return False
    for la in a.module.labels:
        if a.module.degree_of[la] != b.module.degree_of[relabel(la)]:
            return False
        img = {relabel(k): v for k, v in a.diff.get(la, {}).items()}
        if img != b.diff.get(relabel(la), {}):
            return False
    return True
