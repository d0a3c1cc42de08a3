"""SteinLib STP instance files and machine-readable solution records.

All I/O is byte-exact ASCII decimal; keywords are matched case-insensitively
and whitespace is free-form.  Node ids are 1-based in files, 0-based in
memory.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import CountMismatch, NonIntegralCost, StpSyntaxError, TooManyTerminals
from .graph import Graph, SteinerInstance

MAGIC = "33D32945 STP File, STP Format Version 1.0"

CSV_HEADER = ["instance", "n", "m", "k", "opt", "time_ms", "labels", "config"]


class StpFormatWarning(UserWarning):
    pass


def _int_token(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        try:
            float(token)
        except ValueError:
            raise StpSyntaxError(line_no, f"bad {what}: {token!r}") from None
        raise NonIntegralCost(f"line {line_no}: non-integral {what}: {token!r}") from None


def parse_stp(text: Union[str, bytes], name: str = "") -> SteinerInstance:
    """Parse an STP document into a SteinerInstance.

    Terminals keep file order (root selection depends on it).  Duplicate
    edges keep the cheaper cost; self-loop lines are dropped.  A missing
    magic line is tolerated with a warning.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    lines = text.splitlines()

    n = None
    declared_edges = None
    declared_terminals = None
    edge_lines: list[tuple[int, int, int]] = []
    term_lines: list[int] = []
    coord_lines: dict[int, tuple[int, ...]] = {}
    coord_dim = None
    section = None
    saw_magic = False
    saw_any = False

    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if not saw_any:
            saw_any = True
            if line.upper().startswith("33D32945"):
                saw_magic = True
                continue
            warnings.warn("missing STP magic line, parsing anyway", StpFormatWarning)
        tokens = line.split()
        key = tokens[0].upper()
        if key == "SECTION":
            if len(tokens) < 2:
                raise StpSyntaxError(line_no, "SECTION without a name")
            section = tokens[1].upper()
            continue
        if key == "END":
            section = None
            continue
        if key == "EOF":
            break
        if section == "COMMENT" or section is None:
            continue
        if section == "GRAPH":
            if key == "NODES":
                n = _int_token(tokens[1], line_no, "node count")
            elif key == "EDGES" or key == "ARCS":
                declared_edges = _int_token(tokens[1], line_no, "edge count")
            elif key == "E":
                if len(tokens) != 4:
                    raise StpSyntaxError(line_no, f"E line needs 3 fields, got {len(tokens) - 1}")
                u = _int_token(tokens[1], line_no, "node id")
                v = _int_token(tokens[2], line_no, "node id")
                c = _int_token(tokens[3], line_no, "edge cost")
                if c < 0:
                    raise StpSyntaxError(line_no, f"negative edge cost {c}")
                edge_lines.append((u, v, c))
            else:
                raise StpSyntaxError(line_no, f"unexpected keyword {tokens[0]!r} in Graph section")
        elif section == "TERMINALS":
            if key == "TERMINALS":
                declared_terminals = _int_token(tokens[1], line_no, "terminal count")
            elif key == "T":
                term_lines.append(_int_token(tokens[1], line_no, "terminal id"))
            else:
                raise StpSyntaxError(line_no, f"unexpected keyword {tokens[0]!r} in Terminals section")
        elif section == "COORDINATES":
            if set(key) == {"D"} and len(key) >= 2:
                dim = len(key)
                if coord_dim is None:
                    coord_dim = dim
                elif coord_dim != dim:
                    raise StpSyntaxError(line_no, "mixed coordinate dimensions")
                if len(tokens) != dim + 2:
                    raise StpSyntaxError(line_no, f"{key} line needs {dim + 1} fields")
                vid = _int_token(tokens[1], line_no, "node id")
                coord_lines[vid] = tuple(
                    _int_token(t, line_no, "coordinate") for t in tokens[2:]
                )
            else:
                raise StpSyntaxError(line_no, f"unexpected keyword {tokens[0]!r} in Coordinates section")
        # unknown sections are skipped wholesale

    if n is None:
        raise StpSyntaxError(0, "no Nodes declaration found")
    if declared_edges is not None and declared_edges != len(edge_lines):
        raise CountMismatch(
            f"declared {declared_edges} edges but found {len(edge_lines)} E lines"
        )
    if declared_terminals is not None and declared_terminals != len(term_lines):
        raise CountMismatch(
            f"declared {declared_terminals} terminals but found {len(term_lines)} T lines"
        )
    if not term_lines:
        raise StpSyntaxError(0, "no terminals")

    graph = Graph(n)
    for u, v, c in edge_lines:
        if not (1 <= u <= n and 1 <= v <= n):
            raise StpSyntaxError(0, f"edge ({u}, {v}) outside 1..{n}")
        if u == v:
            continue  # self-loops can never occur in a tree
        graph.add_edge(u - 1, v - 1, c)

    terminals = []
    seen = set()
    for t in term_lines:
        if not (1 <= t <= n):
            raise StpSyntaxError(0, f"terminal {t} outside 1..{n}")
        if t - 1 not in seen:
            seen.add(t - 1)
            terminals.append(t - 1)
    if len(terminals) >= 64:
        raise TooManyTerminals(f"{len(terminals)} terminals; the solver supports at most 63")

    coords = None
    if coord_lines:
        coords = [None] * n
        for vid, vec in coord_lines.items():
            if not (1 <= vid <= n):
                raise StpSyntaxError(0, f"coordinate node {vid} outside 1..{n}")
            coords[vid - 1] = vec
        missing = coords.count(None)
        if missing:
            # partial coordinates: only usable if every terminal has one
            if any(coords[t] is None for t in terminals):
                coords = None
    return SteinerInstance(graph=graph, terminals=terminals, name=name, coords=coords)


def parse_stp_file(path) -> SteinerInstance:
    with open(path, "rb") as fh:
        data = fh.read()
    name = str(path).rsplit("/", 1)[-1]
    if name.endswith(".stp"):
        name = name[:-4]
    return parse_stp(data, name=name)


def write_stp(instance: SteinerInstance, comment_name: Optional[str] = None) -> str:
    """Serialize an instance to STP text (always with the magic line)."""
    out = [MAGIC, ""]
    out.append("SECTION Comment")
    out.append(f'Name    "{comment_name or instance.name or "unnamed"}"')
    out.append("END")
    out.append("")
    out.append("SECTION Graph")
    out.append(f"Nodes {instance.n}")
    out.append(f"Edges {instance.m}")
    for (u, v), c in instance.graph.edges():
        out.append(f"E {u + 1} {v + 1} {c}")
    out.append("END")
    out.append("")
    out.append("SECTION Terminals")
    out.append(f"Terminals {instance.k}")
    for t in instance.terminals:
        out.append(f"T {t + 1}")
    out.append("END")
    if instance.coords is not None and any(vec is not None for vec in instance.coords):
        dim = len(next(vec for vec in instance.coords if vec is not None))
        out.append("")
        out.append("SECTION Coordinates")
        for v, vec in enumerate(instance.coords):
            if vec is not None:
                out.append("D" * dim + f" {v + 1} " + " ".join(str(x) for x in vec))
        out.append("END")
    out.append("")
    out.append("EOF")
    return "\n".join(out) + "\n"


@dataclass
class SolutionRecord:
    """One solved instance: optimum cost, tree, and run configuration."""

    instance: str
    n: int
    m: int
    k: int
    opt: int
    edges: list[tuple[int, int]] = field(default_factory=list)
    config: str = ""
    time_ms: float = 0.0
    labels: int = 0
    stats: Optional[object] = None  # SolveStats; never serialized

    def summary_row(self) -> list[str]:
        return [
            self.instance,
            str(self.n),
            str(self.m),
            str(self.k),
            str(self.opt),
            f"{self.time_ms:.3f}",
            str(self.labels),
            self.config,
        ]


def write_solution(record: SolutionRecord, format: str = "json") -> str:
    """Serialize a record; field order is fixed for both formats."""
    if format == "json":
        payload = {
            "instance": record.instance,
            "n": record.n,
            "m": record.m,
            "k": record.k,
            "opt": record.opt,
            "edges": [[u, v] for u, v in record.edges],
            "config": record.config,
            "time_ms": record.time_ms,
            "labels": record.labels,
        }
        return json.dumps(payload, indent=2) + "\n"
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerow(record.summary_row())
        return buf.getvalue()
    raise ValueError(f"unknown format {format!r}")


def read_solution(text: str, format: str = "json") -> SolutionRecord:
    if format == "json":
        payload = json.loads(text)
        return SolutionRecord(
            instance=payload["instance"],
            n=payload["n"],
            m=payload["m"],
            k=payload["k"],
            opt=payload["opt"],
            edges=[(u, v) for u, v in payload.get("edges", [])],
            config=payload.get("config", ""),
            time_ms=payload.get("time_ms", 0.0),
            labels=payload.get("labels", 0),
        )
    if format == "csv":
        rows = list(csv.DictReader(io.StringIO(text)))
        if len(rows) != 1:
            raise ValueError(f"expected exactly one CSV data row, got {len(rows)}")
        row = rows[0]
        return SolutionRecord(
            instance=row["instance"],
            n=int(row["n"]),
            m=int(row["m"]),
            k=int(row["k"]),
            opt=int(row["opt"]),
            edges=[],
            config=row["config"],
            time_ms=float(row["time_ms"]),
            labels=int(row["labels"]),
        )
    raise ValueError(f"unknown format {format!r}")
