"""graph6, edge-list and JSON (de)serialization of ``Graph``."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import GraphError
from .graph import Graph, build

GRAPH6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n < 68719476736:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise GraphError("graph too large for graph6")


def _decode_n(data: bytes) -> tuple[int, bytes]:
    if not data:
        raise GraphError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, data[1:]
    if len(data) > 1 and data[1] == 126:
        chunk, rest = data[2:8], data[8:]
    else:
        chunk, rest = data[1:4], data[4:]
    if len(chunk) not in (3, 6):
        raise GraphError("truncated graph6 size field")
    n = 0
    for c in chunk:
        if not 63 <= c <= 126:
            raise GraphError("malformed graph6 size field")
        n = (n << 6) | (c - 63)
    return n, rest


def to_graph6(g: Graph, header: bool = False) -> str:
    """Encode the upper triangle column by column: bits x(0,1), x(0,2), x(1,2), ..."""
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if (i, j) in g.edges else 0)
    bits.extend([0] * (-len(bits) % 6))
    body = bytearray()
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        body.append(v + 63)
    out = (_encode_n(g.n) + bytes(body)).decode("ascii")
    return GRAPH6_HEADER + out if header else out


def from_graph6(s: str | bytes) -> Graph:
    if isinstance(s, str):
        s = s.encode("ascii")
    s = s.strip()
    if s.startswith(GRAPH6_HEADER.encode()):
        s = s[len(GRAPH6_HEADER):]
    n, rest = _decode_n(s)
    nbits = n * (n - 1) // 2
    if len(rest) != (nbits + 5) // 6:
        raise GraphError(f"graph6 body has {len(rest)} bytes, expected {(nbits + 5) // 6}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            c = rest[k // 6] - 63
            if not 0 <= c < 64:
                raise GraphError("malformed graph6 body byte")
            if (c >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return build(n, edges)


def read_graph6_file(path: str | Path) -> list[Graph]:
    lines = Path(path).read_text().splitlines()
    return [from_graph6(line) for line in lines if line.strip()]


def write_graph6_file(path: str | Path, graphs: list[Graph], header: bool = False) -> None:
    text = "".join(to_graph6(g, header=header and i == 0) + "\n" for i, g in enumerate(graphs))
    Path(path).write_text(text)


def to_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> Graph:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with a line 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"edge list announces {m} edges but has {len(body)}")
    return build(n, [(int(a), int(b)) for a, b in body])


def to_json_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()], "vcolor": list(g.vcolor)}


def from_json_dict(d: dict) -> Graph:
    return build(int(d["n"]), d["edges"], d.get("vcolor") or None)


def to_json(g: Graph) -> str:
    return json.dumps(to_json_dict(g))


def from_json(text: str) -> Graph:
    return from_json_dict(json.loads(text))


def read_graph(path: str | Path) -> Graph:
    """Read one graph, picking the format from the suffix (.g6, .json, else edge list)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return from_json(text)
    if path.suffix in (".g6", ".graph6"):
        graphs = [line for line in text.splitlines() if line.strip()]
        if len(graphs) != 1:
            raise GraphError(f"{path} holds {len(graphs)} graphs, expected 1")
        return from_graph6(graphs[0])
    return from_edgelist(text)


def write_graph(path: str | Path, g: Graph) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(to_json(g) + "\n")
    elif path.suffix in (".g6", ".graph6"):
        path.write_text(to_graph6(g) + "\n")
    else:
        path.write_text(to_edgelist(g))
