"""Wire formats: coefficient JSON, grid-function CSV, report CSV/JSON.

Coefficient JSON schema:

    {"group": "t1" | "t2" | "su2", "bandlimit": L, "value_dim": m,
     "entries": [{"xi": label, "re": [...], "im": [...]}, ...]}

where label is an int (su2: 2l) or a list of ints (torus: k) and re/im are
nested (m, d, d) lists.  Grid-function CSV: one header line, then node
coordinates followed by interleaved re/im columns per value slot.  All float
formatting goes through repr, so identical data serializes byte-identically.
"""

from __future__ import annotations

import csv
import json
import io

import numpy as np

from .classify import DecayReport
from .errors import ParameterError
from .fourier import FourierCoefficients, GridFunction
from .groups import QuadratureGrid, Torus, parse_group_spec
from .spectral import SeminormReport


def label_to_json(group, label):
    if isinstance(group, Torus):
        return list(label)
    return int(label)


def _label_from_json(group, obj):
    if isinstance(group, Torus):
        return tuple(int(v) for v in obj)
    return int(obj)


def coefficients_to_json(T: FourierCoefficients) -> str:
    entries = []
    for xi in T.duals():
        t = T.entries[xi]
        entries.append(
            {
                "xi": label_to_json(T.group, xi.label),
                "re": t.real.tolist(),
                "im": t.imag.tolist(),
            }
        )
    doc = {
        "group": T.group.spec_string(),
        "bandlimit": T.bandlimit,
        "value_dim": T.value_dim,
        "entries": entries,
    }
    return json.dumps(doc, sort_keys=True)


def coefficients_from_json(text: str) -> FourierCoefficients:
    doc = json.loads(text)
    group = parse_group_spec(doc["group"])
    bandlimit = int(doc["bandlimit"])
    m = int(doc["value_dim"])
    index = {xi.label: xi for xi in group.enumerate_dual(bandlimit)}
    entries = {}
    for item in doc["entries"]:
        label = _label_from_json(group, item["xi"])
        if label not in index:
            raise ParameterError(f"label {label!r} outside the declared band limit")
        xi = index[label]
        t = np.asarray(item["re"], dtype=float) + 1j * np.asarray(item["im"], dtype=float)
        entries[xi] = t.reshape(m, xi.dim, xi.dim)
    for xi in index.values():
        entries.setdefault(xi, np.zeros((m, xi.dim, xi.dim), dtype=complex))
    return FourierCoefficients(group, bandlimit, m, entries)


def gridfunction_to_csv(f: GridFunction) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    cdim = f.grid.nodes.shape[1]
    header = [f"x{i}" for i in range(cdim)]
    for v in range(f.value_dim):
        header += [f"re{v}", f"im{v}"]
    writer.writerow(header)
    for node, row in zip(f.grid.nodes, f.values):
        out = [repr(float(c)) for c in node]
        for v in range(f.value_dim):
            out += [repr(float(row[v].real)), repr(float(row[v].imag))]
        writer.writerow(out)
    return buf.getvalue()


def gridfunction_from_csv(text: str, group, grid: QuadratureGrid) -> GridFunction:
    """Parse a grid-function CSV; the nodes must match ``grid`` exactly."""
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r]
    if len(rows) < 2:
        raise ParameterError("grid CSV needs a header and at least one node row")
    header = rows[0]
    cdim = grid.nodes.shape[1]
    ncols = len(header)
    if (ncols - cdim) <= 0 or (ncols - cdim) % 2 != 0:
        raise ParameterError("grid CSV header must be coords plus re/im pairs")
    m = (ncols - cdim) // 2
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    if data.shape[0] != grid.size:
        raise ParameterError(
            f"node count {data.shape[0]} does not match the grid ({grid.size})"
        )
    if not np.allclose(data[:, :cdim], grid.nodes, atol=1e-9):
        raise ParameterError("node coordinates do not match the quadrature grid")
    values = data[:, cdim::2] + 1j * data[:, cdim + 1::2]
    return GridFunction(group, grid, values, value_dim=m)


def decay_table_csv(T: FourierCoefficients) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["sqrt_lambda", "hsnorm"])
    for xi in T.duals():
        writer.writerow([repr(float(np.sqrt(xi.casimir))), repr(T.hs_norms()[xi])])
    return buf.getvalue()


def decay_report_csv(report: DecayReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["sqrt_lambda", "log_hsnorm", "fitted"])
    order = np.argsort(report.sqrt_lambda)
    for i in order:
        writer.writerow(
            [repr(float(report.sqrt_lambda[i])), repr(float(report.log_hsnorm[i])),
             repr(float(report.fitted[i]))]
        )
    return buf.getvalue()


def decay_report_json(report: DecayReport) -> str:
    doc = {
        "weight": report.weight.spec_string(),
        "h_star": report.h_star if np.isfinite(report.h_star) else "inf",
        "slope": report.slope,
        "intercept": report.intercept,
        "residual": report.residual,
        "h_star_low": report.h_star_low if np.isfinite(report.h_star_low) else "inf",
        "h_star_high": report.h_star_high if np.isfinite(report.h_star_high) else "inf",
        "super_omega": report.super_omega,
        "h_values": report.h_values.tolist(),
        "seminorm_values": [v if np.isfinite(v) else "inf" for v in report.seminorm_values],
    }
    return json.dumps(doc, sort_keys=True)


def seminorm_report_csv(report: SeminormReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["j", "supnorm", "weighted_term"])
    for j, sup, term in zip(report.js, report.supnorms, report.weighted_terms):
        writer.writerow([int(j), repr(float(sup)), repr(float(term))])
    return buf.getvalue()
