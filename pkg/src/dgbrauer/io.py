"""JSON presentation documents: parsing with path diagnostics and canonical emission.

Document keys::

    field         "Q" or "Fp:p"
    basis         [[name, degree], ...]
    unit_degree   optional even nonzero integer
    one           a core name, or a term list
    mul           [{"l": name, "r": name, "out": terms}, ...]
    diff          optional [{"b": name, "out": terms}, ...]
    over          optional {"base": path, "nu": [{"b": base name, "out": terms}],
                            "module_basis": [{"label": str, "out": terms}]}
    certificates  optional [{"kind": "norm", "conj": [{"b": name, "out": terms}]}]
    name          optional string

A term list is ``[{"b": name, "u": power, "c": scalar}, ...]``; ``u``
defaults to 0.  Module documents (for ``end``) use ``kind: "module"`` with
``gens`` and ``delta``.
"""

from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass

from .constructions import FreeDgModule, OverBase, point_algebra
from .dg import DgAlgebra, validate_differential, zero_differential
from .graded import Element, GradedAlgebra, GradedPresentation, NormCertificate, ValidationError, validate_presentation
from .scalars import Field

__all__ = [
    "DocumentError",
    "PresentationDocument",
    "parse_presentation",
    "emit",
    "load",
    "document_from_dg",
    "document_from_over",
    "build_dg",
    "build_over",
    "build_module",
]

log = logging.getLogger("dgbrauer")

TOP_KEYS = {"field", "basis", "unit_degree", "one", "mul", "diff", "over", "certificates", "name"}
MODULE_KEYS = {"kind", "field", "gens", "delta", "base", "name"}


class DocumentError(ValueError):
    """Schema violation; ``path`` locates the offending value."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class PresentationDocument:
    """A parsed document in normalized form (``data`` is the canonical dict)."""

    data: dict
    source: str | None = None

    @property
    def is_module(self) -> bool:
        return self.data.get("kind") == "module"


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------


def _need(obj, key, path, kind=None):
    if key not in obj:
        raise DocumentError(path, f"missing key {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise DocumentError(f"{path}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else 'value'}")
    return v


def _check_keys(obj, allowed, path):
    if not isinstance(obj, dict):
        raise DocumentError(path, "expected an object")
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise DocumentError(path, f"unknown key(s) {', '.join(extra)}")


def _int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise DocumentError(path, f"expected an integer, got {v!r}")
    return v


def _scalar(F: Field, v, path):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise DocumentError(path, f"invalid scalar {v!r} (use a string such as \"1/2\")")
    try:
        return F(v)
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(path, f"invalid scalar {v!r}: {e}") from None


def _terms(F: Field, raw, path, names=None, key="b"):
    if not isinstance(raw, list):
        raise DocumentError(path, "expected a list of terms")
    out = {}
    for i, t in enumerate(raw):
        p = f"{path}[{i}]"
        _check_keys(t, {key, "u", "c"}, p)
        b = _need(t, key, p, str)
        if names is not None and b not in names:
            raise DocumentError(f"{p}.{key}", f"unknown basis name {b!r}")
        u = _int(t.get("u", 0), f"{p}.u")
        c = _scalar(F, _need(t, "c", p), f"{p}.c")
        out[(b, u)] = F.add(out.get((b, u), F(0)), c)
    return {k: v for k, v in out.items() if v != 0}


def _emit_terms(F: Field, terms: dict, order: dict, key="b") -> list:
    items = sorted(terms.items(), key=lambda kv: (order.get(kv[0][0], len(order)), kv[0][0], kv[0][1]))
    return [{key: b, "u": u, "c": F.format(c)} for (b, u), c in items if c != 0]


def parse_presentation(text: str, source: str | None = None) -> PresentationDocument:
    """Parse and normalize a document; raises DocumentError with a location."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno} column {e.colno}", e.msg) from None
    if isinstance(raw, dict) and raw.get("kind") == "module":
        return PresentationDocument(_normalize_module(raw), source)
    _check_keys(raw, TOP_KEYS, "$")
    try:
        F = Field.from_label(_need(raw, "field", "$", str))
    except ValueError as e:
        raise DocumentError("$.field", str(e)) from None
    basis_raw = _need(raw, "basis", "$", list)
    basis = []
    for i, entry in enumerate(basis_raw):
        p = f"$.basis[{i}]"
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], str)):
            raise DocumentError(p, "expected [name, degree]")
        basis.append([entry[0], _int(entry[1], f"{p}[1]")])
    names = [b for b, _ in basis]
    if len(set(names)) != len(names):
        raise DocumentError("$.basis", "duplicate basis names")
    order = {b: i for i, b in enumerate(names)}
    data = {"field": F.label, "basis": basis}
    if raw.get("unit_degree") is not None:
        data["unit_degree"] = _int(raw["unit_degree"], "$.unit_degree")
    if "name" in raw:
        data["name"] = str(raw["name"])
    one = _need(raw, "one", "$")
    if isinstance(one, str):
        if one not in order:
            raise DocumentError("$.one", f"unknown basis name {one!r}")
        data["one"] = one
    else:
        data["one"] = _emit_terms(F, _terms(F, one, "$.one", order), order)
    mul = {}
    for i, entry in enumerate(_need(raw, "mul", "$", list)):
        p = f"$.mul[{i}]"
        _check_keys(entry, {"l", "r", "out"}, p)
        l, r = _need(entry, "l", p, str), _need(entry, "r", p, str)
        for nm, key in ((l, "l"), (r, "r")):
            if nm not in order:
                raise DocumentError(f"{p}.{key}", f"unknown basis name {nm!r}")
        if (l, r) in mul:
            raise DocumentError(p, f"duplicate entry for {l}*{r}")
        mul[(l, r)] = _terms(F, _need(entry, "out", p), f"{p}.out", order)
    data["mul"] = [
        {"l": l, "r": r, "out": _emit_terms(F, t, order)}
        for (l, r), t in sorted(mul.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]]))
    ]
    missing = [(l, r) for l in names for r in names if (l, r) not in mul]
    if missing:
        head = ", ".join(f"{l}*{r}" for l, r in missing[:4])
        log.warning("lint: %d product(s) not listed, taken as zero (%s%s)", len(missing), head, ", ..." if len(missing) > 4 else "")
    if "diff" in raw:
        diff = {}
        for i, entry in enumerate(_need(raw, "diff", "$", list)):
            p = f"$.diff[{i}]"
            _check_keys(entry, {"b", "out"}, p)
            b = _need(entry, "b", p, str)
            if b not in order:
                raise DocumentError(f"{p}.b", f"unknown basis name {b!r}")
            diff[b] = _terms(F, _need(entry, "out", p), f"{p}.out", order)
        data["diff"] = [{"b": b, "out": _emit_terms(F, diff[b], order)} for b in names if diff.get(b)]
    if "over" in raw:
        data["over"] = _normalize_over(F, raw["over"], order)
    if "certificates" in raw:
        certs = []
        for i, c in enumerate(_need(raw, "certificates", "$", list)):
            p = f"$.certificates[{i}]"
            _check_keys(c, {"kind", "conj"}, p)
            if c.get("kind") != "norm":
                raise DocumentError(f"{p}.kind", "only norm certificates are supported")
            conj = {}
            for j, e in enumerate(_need(c, "conj", p, list)):
                q = f"{p}.conj[{j}]"
                _check_keys(e, {"b", "out"}, q)
                conj[_need(e, "b", q, str)] = _terms(F, _need(e, "out", q), f"{q}.out", order)
            certs.append({"kind": "norm", "conj": [{"b": b, "out": _emit_terms(F, conj.get(b, {}), order)} for b in names]})
        data["certificates"] = certs
    return PresentationDocument(data, source)


def _normalize_over(F: Field, over, order) -> dict:
    p = "$.over"
    _check_keys(over, {"base", "nu", "module_basis"}, p)
    out = {"base": _need(over, "base", p, str)}
    nu = []
    for i, e in enumerate(_need(over, "nu", p, list)):
        q = f"{p}.nu[{i}]"
        _check_keys(e, {"b", "out"}, q)
        nu.append({"b": _need(e, "b", q, str), "out": _emit_terms(F, _terms(F, _need(e, "out", q), f"{q}.out", order), order)})
    out["nu"] = nu
    mb = []
    for i, e in enumerate(_need(over, "module_basis", p, list)):
        q = f"{p}.module_basis[{i}]"
        _check_keys(e, {"label", "out"}, q)
        mb.append({"label": str(_need(e, "label", q)), "out": _emit_terms(F, _terms(F, _need(e, "out", q), f"{q}.out", order), order)})
    out["module_basis"] = mb
    return out


def _normalize_module(raw) -> dict:
    _check_keys(raw, MODULE_KEYS, "$")
    try:
        F = Field.from_label(_need(raw, "field", "$", str))
    except ValueError as e:
        raise DocumentError("$.field", str(e)) from None
    gens = []
    for i, g in enumerate(_need(raw, "gens", "$", list)):
        if not (isinstance(g, list) and len(g) == 2 and isinstance(g[0], str)):
            raise DocumentError(f"$.gens[{i}]", "expected [label, degree]")
        gens.append([g[0], _int(g[1], f"$.gens[{i}][1]")])
    labels = {g: i for i, (g, _) in enumerate(gens)}
    data = {"kind": "module", "field": F.label, "gens": gens}
    for k in ("base", "name"):
        if k in raw:
            data[k] = str(raw[k])
    delta = []
    for i, e in enumerate(raw.get("delta", [])):
        p = f"$.delta[{i}]"
        _check_keys(e, {"g", "out"}, p)
        g = _need(e, "g", p, str)
        if g not in labels:
            raise DocumentError(f"{p}.g", f"unknown generator {g!r}")
        outs = []
        for j, t in enumerate(_need(e, "out", p, list)):
            q = f"{p}.out[{j}]"
            _check_keys(t, {"g", "coef"}, q)
            h = _need(t, "g", q, str)
            if h not in labels:
                raise DocumentError(f"{q}.g", f"unknown generator {h!r}")
            coef = _terms(F, _need(t, "coef", q), f"{q}.coef")
            outs.append({"g": h, "coef": _emit_terms(F, coef, {})})
        delta.append({"g": g, "out": outs})
    data["delta"] = delta
    return data


def emit(doc) -> str:
    """Canonical text: sorted keys, no insignificant whitespace, trailing newline."""
    data = doc.data if isinstance(doc, PresentationDocument) else doc
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def load(path: str) -> PresentationDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(path, f"cannot read file ({e.strerror})") from None
    return parse_presentation(text, source=path)


# --------------------------------------------------------------------------
# documents <-> algebra objects
# --------------------------------------------------------------------------


def _term_map(terms: list) -> dict:
    return {(t["b"], t["u"]): t["c"] for t in terms}


def build_dg(doc: PresentationDocument) -> DgAlgebra:
    d = doc.data
    F = Field.from_label(d["field"])
    one = d["one"] if isinstance(d["one"], str) else _term_map(d["one"])
    pres = GradedPresentation(
        field=F,
        basis=[tuple(b) for b in d["basis"]],
        mul={(e["l"], e["r"]): _term_map(e["out"]) for e in d["mul"]},
        one=one,
        unit_degree=d.get("unit_degree"),
        name=d.get("name", ""),
    )
    try:
        A = validate_presentation(pres)
    except ValidationError as e:
        raise ValidationError(e.kind, _locate(d, str(e)), e.witness) from None
    if d.get("certificates"):
        pres.certificates = tuple(
            NormCertificate({e["b"]: A.elem(_term_map(e["out"])) for e in c["conj"]}) for c in d["certificates"]
        )
        A = validate_presentation(pres)
    diff = {e["b"]: A.elem(_term_map(e["out"])) for e in d.get("diff", [])}
    return validate_differential(A, diff)


def _locate(data: dict, message: str) -> str:
    """Prefix a table diagnostic with the path of the mul entry it names."""
    m = re.search(r"in (\S+)\*(\S+?):", message)
    if m:
        for i, e in enumerate(data["mul"]):
            if (e["l"], e["r"]) == m.groups():
                return f"$.mul[{i}] ({e['l']}*{e['r']}): {message}"
    return message


def _resolve(ref: str, doc: PresentationDocument) -> str:
    if os.path.isabs(ref) or doc.source is None:
        return ref
    cand = os.path.join(os.path.dirname(doc.source), ref)
    return cand if os.path.exists(cand) else ref


def build_over(doc: PresentationDocument, base: DgAlgebra | None = None) -> OverBase:
    """Algebra over the base named in ``over`` (or the given ``base``)."""
    Ad = build_dg(doc)
    A = Ad.algebra
    over = doc.data.get("over")
    if over is None:
        if base is None:
            raise DocumentError("$.over", "document has no base structure")
        return default_over(Ad, base)
    if base is None:
        base = build_dg(load(_resolve(over["base"], doc)))
    K = base.algebra
    nu = {e["b"]: A.elem(_term_map(e["out"])) for e in over["nu"]}
    for b in K.names:
        if b not in nu:
            raise DocumentError("$.over.nu", f"no image for base element {b!r}")
    basis = [(e["label"], A.elem(_term_map(e["out"]))) for e in over["module_basis"]]
    X = OverBase(base, Ad, nu, basis, name=A.name)
    X.check_free()
    return X


def default_over(Ad: DgAlgebra, base: DgAlgebra) -> OverBase:
    """Implicit structure: over a field in degree 0, or the base over itself."""
    from .constructions import over_field, over_itself
    from .graded import same_table

    K = base.algebra
    if same_table(K, Ad.algebra):
        return over_itself(Ad)
    if len(K.names) == 1 and K.deg[K.names[0]] == 0 and not K.periodic:
        return over_field(Ad)
    raise DocumentError("$.over", "no base structure given and the base is not the ground field")


def build_module(doc: PresentationDocument, base: DgAlgebra | None = None) -> FreeDgModule:
    d = doc.data
    F = Field.from_label(d["field"])
    if base is None:
        base = build_dg(load(_resolve(d["base"], doc))) if "base" in d else point_algebra(F)
    K = base.algebra
    labels = {g: i for i, (g, _) in enumerate(d["gens"])}
    r = len(labels)
    delta = [[K.zero() for _ in range(r)] for _ in range(r)]
    for e in d.get("delta", []):
        j = labels[e["g"]]
        for t in e["out"]:
            delta[j][labels[t["g"]]] = K.elem(_term_map(t["coef"]))
    return FreeDgModule(base, d["gens"], delta)


def _alg_terms(A: GradedAlgebra, x: Element) -> list:
    return _emit_terms(A.field, x.terms, A.index)


def document_from_dg(Ad: DgAlgebra, name: str | None = None) -> PresentationDocument:
    A = Ad.algebra
    F = A.field
    data = {"field": F.label, "basis": [[b, A.deg[b]] for b in A.names]}
    if A.periodic:
        data["unit_degree"] = A.unit_degree
    data["one"] = A.pres.one if isinstance(A.pres.one, str) else _alg_terms(A, A.one())
    # zero products are listed explicitly so that re-reading stays lint-free
    data["mul"] = [
        {"l": l, "r": r, "out": _emit_terms(F, A.table.get((l, r), {}), A.index)} for l in A.names for r in A.names
    ]
    diff = [{"b": b, "out": _alg_terms(A, Ad.d[b])} for b in A.names if Ad.d[b]]
    if diff:
        data["diff"] = diff
    if name or A.name:
        data["name"] = name or A.name
    certs = [c for c in A.certificates if isinstance(c, NormCertificate)]
    if certs:
        data["certificates"] = [
            {"kind": "norm", "conj": [{"b": b, "out": _alg_terms(A, c.conj[b].rebind(A))} for b in A.names]} for c in certs
        ]
    return parse_presentation(emit(data))


def document_from_over(X: OverBase, base_ref: str) -> PresentationDocument:
    doc = document_from_dg(X.carrier, X.name)
    A = X.A
    data = dict(doc.data)
    data["over"] = {
        "base": base_ref,
        "nu": [{"b": b, "out": _alg_terms(A, X.nu[b])} for b in X.K.names],
        "module_basis": [{"label": lab, "out": _alg_terms(A, e)} for lab, e in X.basis],
    }
    return parse_presentation(emit(data))
