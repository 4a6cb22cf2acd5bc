"""Manifold and result files.

A manifold file is a single JSON document with integral structure constants;
the prime is applied at load time, so one file serves every prime.  Unknown
fields are rejected.  Result files echo their inputs and list matrix/vector
entries and taint slots; dumping is byte-stable (sorted keys, fixed layout).
"""

import json

from .errors import ManifoldFormatError
from .ring import QuantumRing


_TOP_FIELDS = {
    "name",
    "basis",
    "q_degree",
    "dimension_top",
    "divisors",
    "products",
    "steenrod",
    "default_leading_steenrod",
}


def _check_fields(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ManifoldFormatError("%s: expected an object" % where, field=where)
    for key in obj:
        if key not in allowed:
            raise ManifoldFormatError(
                "%s: unknown field %r" % (where, key), field="%s.%s" % (where, key)
            )


def validate_manifold_data(data):
    _check_fields(data, _TOP_FIELDS, "manifold")
    for fieldname in ("name", "basis", "q_degree", "dimension_top", "divisors", "products"):
        if fieldname not in data:
            raise ManifoldFormatError("missing field %r" % fieldname, field=fieldname)
    for i, b in enumerate(data["basis"]):
        _check_fields(b, {"name", "degree"}, "basis[%d]" % i)
    for i, dv in enumerate(data["divisors"]):
        _check_fields(dv, {"name", "pairing", "primary"}, "divisors[%d]" % i)
    names = [b["name"] for b in data["basis"]]
    for i, pr in enumerate(data["products"]):
        _check_fields(pr, {"left", "right", "q", "terms"}, "products[%d]" % i)
        for side in ("left", "right"):
            if pr[side] not in names:
                raise ManifoldFormatError(
                    "products[%d].%s: unknown class %r" % (i, side, pr[side]),
                    field="products[%d].%s" % (i, side),
                )
        for j, term in enumerate(pr["terms"]):
            _check_fields(term, {"basis", "coeff"}, "products[%d].terms[%d]" % (i, j))
            if term["basis"] not in names:
                raise ManifoldFormatError(
                    "products[%d].terms[%d]: unknown class %r" % (i, j, term["basis"]),
                    field="products[%d].terms[%d].basis" % (i, j),
                )
    for pstr, table in data.get("steenrod", {}).items():
        if not pstr.isdigit():
            raise ManifoldFormatError(
                "steenrod: prime keys must be digit strings", field="steenrod.%s" % pstr
            )
        for gen, entry in table.items():
            if gen not in names:
                raise ManifoldFormatError(
                    "steenrod.%s: unknown class %r" % (pstr, gen),
                    field="steenrod.%s.%s" % (pstr, gen),
                )
            for j, term in enumerate(entry):
                _check_fields(
                    term,
                    {"basis", "t", "theta", "coeff"},
                    "steenrod.%s.%s[%d]" % (pstr, gen, j),
                )
    return data


def ring_from_data(data, prime):
    """Bind a validated manifold description to a prime."""
    validate_manifold_data(data)
    names = [b["name"] for b in data["basis"]]
    index = {n: i for i, n in enumerate(names)}
    basis = [(b["name"], b["degree"]) for b in data["basis"]]
    divisors = [
        (index[d["name"]], d["pairing"], bool(d.get("primary", False)))
        for d in data["divisors"]
    ]
    products = {}
    seen_pairs = set()
    for pr in data["products"]:
        i, j, d = index[pr["left"]], index[pr["right"]], pr["q"]
        seen_pairs.add((min(i, j), max(i, j)))
        terms = {}
        for term in pr["terms"]:
            k = index[term["basis"]]
            terms[k] = terms.get(k, 0) + term["coeff"]
        key = (i, j, d)
        if key in products:
            raise ManifoldFormatError(
                "duplicate product entry (%s, %s, q^%d)" % (pr["left"], pr["right"], d),
                field="products",
            )
        products[key] = terms
    nonunit = [i for i, b in enumerate(data["basis"]) if b["degree"] > 0]
    for a in nonunit:
        for b in nonunit:
            if a <= b and (a, b) not in seen_pairs:
                raise ManifoldFormatError(
                    "missing product entry for (%s, %s)" % (names[a], names[b]),
                    field="products",
                )
    steenrod = {}
    for pstr, table in data.get("steenrod", {}).items():
        entry = {}
        for gen, terms in table.items():
            entry[index[gen]] = [
                (index[t["basis"]], t["t"], t["theta"], t["coeff"]) for t in terms
            ]
        steenrod[int(pstr)] = entry
    try:
        return QuantumRing(
            name=data["name"],
            prime=prime,
            basis=basis,
            q_degree=data["q_degree"],
            dimension_top=data["dimension_top"],
            divisors=divisors,
            products=products,
            steenrod=steenrod,
            default_leading_steenrod=data.get("default_leading_steenrod", True),
        )
    except ValueError as exc:
        raise ManifoldFormatError(str(exc)) from exc


def dump_manifold(data):
    validate_manifold_data(data)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def load_manifold(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifoldFormatError("line %d: %s" % (exc.lineno, exc.msg)) from exc
    return validate_manifold_data(data)


# -- result files --------------------------------------------------------------

_RESULT_FIELDS = {
    "manifold",
    "prime",
    "class",
    "op",
    "truncation",
    "degree",
    "result",
    "taint",
    "report",
}


def endo_result_data(endo, meta, report=None):
    ring = endo.ring
    rows = []
    for (i, j, d) in sorted(endo.entries):
        rows.append(
            {
                "from": ring.basis[i].name,
                "to": ring.basis[j].name,
                "q": d,
                "t": endo.kappa(i, j, d),
                "theta": 0,
                "coeff": endo.entries[(i, j, d)],
            }
        )
    taint = [
        {"from": ring.basis[i].name, "to": ring.basis[j].name, "q": d}
        for (i, j, d) in sorted(endo.taint)
    ]
    data = dict(meta)
    data.update(
        {
            "truncation": endo.trunc,
            "degree": endo.degree,
            "result": rows,
            "taint": taint,
            "report": _report_data(report),
        }
    )
    return data


def element_result_data(elem, taint, meta, degree, trunc, report=None):
    ring = elem.ring
    rows = []
    for k in sorted(elem.components):
        f = elem.components[k]
        for mono in sorted(f.terms):
            rows.append(
                {
                    "from": "1",
                    "to": ring.basis[k].name,
                    "q": mono.q,
                    "t": mono.t,
                    "theta": mono.theta,
                    "coeff": f.terms[mono],
                }
            )
    taint_rows = [
        {"from": "1", "to": ring.basis[j].name, "q": d} for (j, d) in sorted(taint)
    ]
    data = dict(meta)
    data.update(
        {
            "truncation": trunc,
            "degree": degree,
            "result": rows,
            "taint": taint_rows,
            "report": _report_data(report),
        }
    )
    return data


def _report_data(report):
    if report is None:
        return {}
    return {
        "seed_checks": report.seed_checks,
        "seeds_resolving_taint": report.seeds_resolving_taint,
        "residual_checked": report.residual_checked,
        "residual_failures": {k: list(v) for k, v in report.residual_failures.items()},
    }


def dump_result(data):
    for key in data:
        if key not in _RESULT_FIELDS:
            raise ManifoldFormatError("unknown result field %r" % key, field=key)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def load_result(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifoldFormatError("line %d: %s" % (exc.lineno, exc.msg)) from exc
    for key in data:
        if key not in _RESULT_FIELDS:
            raise ManifoldFormatError("unknown result field %r" % key, field=key)
    return data
