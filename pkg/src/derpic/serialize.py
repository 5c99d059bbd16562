"""JSON formats for algebras, elements, complexes, chain maps and tilting data.

Scalars are strings ("num/den" over Q, the residue over F_p); basis
elements are named by their labels, so an element of a Nakayama algebra is
a list of [[i, k], "c"] pairs and an orbit element a list of
[[l, [i, k]], "c"] pairs.
"""

import json

from .algebra import frobenius_pair, make_nakayama
from .homotopy import ChainMap, ProjComplex
from .orbit import CyclicAction, make_orbit_algebra

_ALGEBRAS = {}


def _desc_key(desc):
    return json.dumps(desc, sort_keys=True)


def algebra_from_descriptor(desc):
    """Build (or fetch the cached) algebra named by a descriptor."""
    key = _desc_key(desc)
    hit = _ALGEBRAS.get(key)
    if hit is not None:
        return hit
    kind = desc.get("kind")
    if kind == "nakayama":
        A = make_nakayama(desc["n"], desc["m"], desc["t"], desc.get("field", "Q"))
    elif kind == "orbit":
        base = algebra_from_descriptor(desc["base"])
        _, nu, order = frobenius_pair(base)
        if order != desc["n"]:
            raise ValueError(f"Nakayama automorphism has order {order}, not {desc['n']}")
        A = make_orbit_algebra(CyclicAction(base, nu, desc["n"]))
    else:
        raise ValueError(f"unknown algebra kind {kind!r}")
    register(A)
    return A


def register(A):
    """Make ``A`` the algebra returned for its descriptor."""
    _ALGEBRAS.setdefault(_desc_key(A.descriptor), A)
    return _ALGEBRAS[_desc_key(A.descriptor)]


def scalar_to_json(F, c):
    if F.p == 0:
        return f"{int(c.p)}/{int(c.q)}"
    return str(int(c))


def scalar_from_json(F, s):
    return F(str(s))


def _label_to_json(lab):
    if isinstance(lab, tuple):
        return [_label_to_json(x) for x in lab]
    return lab


def _label_from_json(x):
    if isinstance(x, list):
        return tuple(_label_from_json(y) for y in x)
    return x


def _label_index(A):
    idx = getattr(A, "_label_index", None)
    if idx is None:
        idx = {lab: b for b, lab in enumerate(A.labels)}
        A._label_index = idx
    return idx


def element_to_json(A, x):
    return [[_label_to_json(A.labels[b]), scalar_to_json(A.field, c)] for b, c in sorted(x.items())]


def element_from_json(A, data):
    idx = _label_index(A)
    out = {}
    for lab, c in data:
        b = idx[_label_from_json(lab)]
        v = scalar_from_json(A.field, c)
        if v != 0:
            out[b] = v
    return out


def _matrix_to_json(A, M):
    return [[r, c, element_to_json(A, v)] for r in sorted(M) for c, v in sorted(M[r].items())]


def _matrix_from_json(A, data):
    out = {}
    for r, c, v in data:
        out.setdefault(int(r), {})[int(c)] = element_from_json(A, v)
    return out


def complex_to_json(X, with_algebra=True):
    A = X.algebra
    out = {}
    if with_algebra:
        out["algebra"] = A.descriptor
    out["degrees"] = {str(d): list(t) for d, t in sorted(X.terms.items())}
    out["diff"] = {str(d): _matrix_to_json(A, M) for d, M in sorted(X.diff.items())}
    return out


def complex_from_json(data, algebra=None):
    A = algebra or algebra_from_descriptor(data["algebra"])
    terms = {int(d): t for d, t in data["degrees"].items()}
    diff = {int(d): _matrix_from_json(A, M) for d, M in data.get("diff", {}).items()}
    return ProjComplex(A, terms, diff)


def map_to_json(f, with_algebra=True):
    out = {}
    if with_algebra:
        out["algebra"] = f.algebra.descriptor
    out["shift"] = f.shift
    out["source"] = complex_to_json(f.src, False)
    out["target"] = complex_to_json(f.tgt, False)
    out["comps"] = {str(d): _matrix_to_json(f.algebra, M) for d, M in sorted(f.comps.items())}
    return out


def map_from_json(data, algebra=None):
    A = algebra or algebra_from_descriptor(data["algebra"])
    X = complex_from_json(data["source"], A)
    Y = complex_from_json(data["target"], A)
    comps = {int(d): _matrix_from_json(A, M) for d, M in data["comps"].items()}
    return ChainMap(X, Y, comps, data.get("shift", 0))


def tilting_to_json(theta):
    B, A = theta.source, theta.target
    return {
        "source": B.descriptor,
        "target": A.descriptor,
        "images": {str(j): complex_to_json(X, False) for j, X in enumerate(theta.images)},
        "morphisms": {B.label_str(b): {"shift": f.shift,
                                       "comps": {str(d): _matrix_to_json(A, M)
                                                 for d, M in sorted(f.comps.items())}}
                      for b, f in sorted(theta.morphisms.items())},
    }


def tilting_from_json(data):
    from .tilting import TiltingFunctorData
    B = algebra_from_descriptor(data["source"])
    A = algebra_from_descriptor(data["target"])
    images = [complex_from_json(data["images"][str(j)], A) for j in range(len(B.idempotents))]
    names = {B.label_str(b): b for b in range(B.dim)}
    morph = {}
    for name, f in data["morphisms"].items():
        b = names[name]
        i, j = B.source[b], B.target[b]
        comps = {int(d): _matrix_from_json(A, M) for d, M in f["comps"].items()}
        morph[b] = ChainMap(images[i], images[j], comps, f.get("shift", 0))
    return TiltingFunctorData(B, A, images, morph)
