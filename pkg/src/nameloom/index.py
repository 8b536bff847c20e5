"""Build, persist, load and query the corpus database.

The index holds four posting families plus the graph store, all keyed
through one interned string table:

* ``edge_postings``:  (pivot, relType) -> sorted (nameId, graphOrdinal) pairs
* ``name_postings``:  variable name -> sorted functionIds declaring it
* ``fn_name_postings``: function name -> sorted functionIds with that name
* ``token_postings``: function-name token -> sorted functionIds
* ``graph_store``:    variable name -> every relation graph seen for it

On-disk layout is a directory with ``meta.json`` (human-readable header)
and ``index.bin``: a magic header (``NLIX`` + u16 major/minor version)
followed by length-prefixed binary sections, one per family, each tagged,
CRC32-checked and little-endian with 32-bit ids:

    [4s tag][u64 payload length][u32 crc32][payload]

Section order: STRT (string table), GRPH (graphs), EPST (edge postings),
NPST (name postings), FPST (function-name postings), TPST (token postings).
"""

from __future__ import annotations

import hashlib
import json
import struct
import zlib
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import BuildError, LoadError, ParseError
from .extraction import (FunctionRecord, RelationEdge, RelationGraph, RelType,
                         STOPWORDS, parse_functions)

MAGIC = b"NLIX"
FORMAT_MAJOR = 1
FORMAT_MINOR = 0
_SECTION_ORDER = (b"STRT", b"GRPH", b"EPST", b"NPST", b"FPST", b"TPST")

# internal graph encoding: frozenset of (pivot_id, rel_value)
EncodedGraph = frozenset


class CorpusIndex:
    def __init__(self):
        self.strings: list[str] = []
        self.string_ids: dict[str, int] = {}
        self.graph_store: dict[int, list[EncodedGraph]] = {}
        self.edge_postings: dict[tuple[int, int], list[tuple[int, int]]] = {}
        self.name_postings: dict[int, list[int]] = {}
        self.fn_name_postings: dict[int, list[int]] = {}
        self.token_postings: dict[int, list[int]] = {}
        self.meta: dict = {}

    # -- string interning ---------------------------------------------------

    def intern(self, text: str) -> int:
        existing = self.string_ids.get(text)
        if existing is not None:
            return existing
        nid = len(self.strings)
        self.strings.append(text)
        self.string_ids[text] = nid
        return nid

    def lookup(self, text: str) -> int | None:
        return self.string_ids.get(text)

    def name(self, nid: int) -> str:
        return self.strings[nid]

    # -- building -------------------------------------------------------------

    def add_function(self, function_id: int, record: FunctionRecord) -> None:
        if record.name:
            fid = self.intern(record.name)
            self.fn_name_postings.setdefault(fid, []).append(function_id)
        for token in sorted(set(record.name_tokens)):
            tid = self.intern(token)
            self.token_postings.setdefault(tid, []).append(function_id)
        for var_name, graph in record.variables:
            nid = self.intern(var_name)
            self.name_postings.setdefault(nid, []).append(function_id)
            encoded = self.encode_graph(graph, intern=True)
            graphs = self.graph_store.setdefault(nid, [])
            ordinal = len(graphs)
            graphs.append(encoded)
            for edge in encoded:
                self.edge_postings.setdefault(edge, []).append((nid, ordinal))

    def finalize(self) -> None:
        """Sort and deduplicate every posting list (set semantics)."""
        for table in (self.name_postings, self.fn_name_postings,
                      self.token_postings):
            for key, postings in table.items():
                table[key] = sorted(set(postings))
        for key, postings in self.edge_postings.items():
            self.edge_postings[key] = sorted(set(postings))

    # -- graph encoding ---------------------------------------------------------

    def encode_graph(self, graph: RelationGraph, intern: bool = False) -> EncodedGraph:
        """Map a RelationGraph onto interned ids. Without `intern`, pivots
        unknown to the index become -1 (they can never match).

        Edges are visited in sorted order so interning assigns the same ids
        on every build (set iteration order is hash-randomized).
        """
        out = set()
        for edge in sorted(graph.edges, key=lambda e: (e.pivot, int(e.rel))):
            pid = self.intern(edge.pivot) if intern else self.lookup(edge.pivot)
            out.add((pid if pid is not None else -1, int(edge.rel)))
        return frozenset(out)

    def decode_graph(self, variable: str, encoded: EncodedGraph) -> RelationGraph:
        edges = frozenset(
            RelationEdge(self.name(pid), RelType(rel)) for pid, rel in encoded
        )
        return RelationGraph(variable, edges)

    # -- queries -------------------------------------------------------------------

    def postings_for_name(self, nid: int) -> list[int]:
        return self.name_postings.get(nid, [])

    def count_all(self, name_ids) -> tuple[int, int]:
        """(|∩|, |∪|) over the functions containing each name.

        Unknown ids contribute empty posting lists.
        """
        ids = list(name_ids)
        if not ids:
            raise ValueError("count_all requires at least one name")
        lists = [self.name_postings.get(nid, []) for nid in ids]
        return _intersection_size(lists), _union_size(lists)

    def count_name_with_function_name(
            self, vn: int | None, fn_or_token: str, mode: str,
    ) -> tuple[int, int, int]:
        """(N_both, N_vn, N_fn-or-token) function counts.

        `mode` is "full" (function names) or "token" (name tokens).
        """
        if mode not in ("full", "token"):
            raise ValueError(f"unknown mode {mode!r}")
        table = self.fn_name_postings if mode == "full" else self.token_postings
        vn_postings = self.name_postings.get(vn, []) if vn is not None else []
        fid = self.lookup(fn_or_token)
        fn_postings = table.get(fid, []) if fid is not None else []
        n_both = _intersection_size([vn_postings, fn_postings])
        return n_both, len(vn_postings), len(fn_postings)

    def candidates_by_edges(
            self, query_graph: RelationGraph,
    ) -> dict[int, list[tuple[int, int]]]:
        """For every stored graph sharing >=1 edge with the query, how many
        query edges it contains: nameId -> [(graphOrdinal, matchedCount)].
        """
        if not query_graph.edges:
            raise ValueError("query graph has no edges")
        counts: dict[tuple[int, int], int] = {}
        for edge in self.encode_graph(query_graph):
            for entry in self.edge_postings.get(edge, ()):
                counts[entry] = counts.get(entry, 0) + 1
        out: dict[int, list[tuple[int, int]]] = {}
        for (nid, ordinal), matched in counts.items():
            out.setdefault(nid, []).append((ordinal, matched))
        for nid in out:
            out[nid].sort()
        return out

    def stats(self) -> dict:
        graphs = sum(len(v) for v in self.graph_store.values())
        edges = sum(len(g) for v in self.graph_store.values() for g in v)
        return {
            "functions": self.meta.get("functions", 0),
            "unique_names": len(self.name_postings),
            "graphs": graphs,
            "edges": edges,
            "mean_edges_per_graph": round(edges / graphs, 3) if graphs else 0.0,
        }


def _intersection_size(lists: list[list[int]]) -> int:
    if not lists:
        return 0
    lists = sorted(lists, key=len)
    if not lists[0]:
        return 0
    current = lists[0]
    for other in lists[1:]:
        current = _intersect_pair(current, other)
        if not current:
            return 0
    return len(current)


def _intersect_pair(a: list[int], b: list[int]) -> list[int]:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return out


def _union_size(lists: list[list[int]]) -> int:
    seen: set[int] = set()
    for postings in lists:
        seen.update(postings)
    return len(seen)


# -- corpus building ------------------------------------------------------------


def _parse_one(args: tuple[str, str]) -> tuple[str, list[FunctionRecord] | None, str]:
    rel, text = args
    try:
        return rel, parse_functions(text, rel), ""
    except ParseError as exc:
        return rel, None, str(exc)


def build_index(corpus_root: str | Path, jobs: int = 1,
                built_at: str | None = None,
                include: set[str] | None = None) -> CorpusIndex:
    """Index every ``.js`` file under `corpus_root` (lexicographic order).

    Files that fail to parse are skipped and recorded in meta; duplicate
    file contents (by sha256) are indexed once. `include`, when given,
    restricts the build to those posix-relative paths (fold training sets).
    Raises BuildError when the corpus yields no parseable function at all.
    """
    root = Path(corpus_root)
    if not root.is_dir():
        raise BuildError(f"corpus directory not found: {root}")
    files = sorted(root.rglob("*.js"), key=lambda p: p.relative_to(root).as_posix())
    if include is not None:
        files = [p for p in files if p.relative_to(root).as_posix() in include]
    if not files:
        raise BuildError(f"empty corpus: no .js files under {root}")

    texts: list[tuple[str, str]] = []
    seen_hashes: dict[str, str] = {}
    duplicates = 0
    read_failures: list[dict] = []
    hasher = hashlib.sha256()
    for path in files:
        rel = path.relative_to(root).as_posix()
        try:
            data = path.read_bytes()
        except OSError as exc:
            read_failures.append({"file": rel, "error": str(exc)})
            continue
        digest = hashlib.sha256(data).hexdigest()
        hasher.update(rel.encode() + b"\0" + digest.encode() + b"\0")
        if digest in seen_hashes:
            duplicates += 1
            continue
        seen_hashes[digest] = rel
        texts.append((rel, data.decode("utf-8", errors="replace")))

    if jobs > 1 and len(texts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parsed = list(pool.map(_parse_one, texts, chunksize=8))
    else:
        parsed = [_parse_one(item) for item in texts]

    index = CorpusIndex()
    function_id = 0
    files_indexed = 0
    parse_failures: list[dict] = []
    for rel, records, error in parsed:
        if records is None:
            parse_failures.append({"file": rel, "error": error})
            continue
        files_indexed += 1
        for record in records:
            index.add_function(function_id, record)
            function_id += 1
    if function_id == 0:
        raise BuildError(f"empty corpus: no parseable function under {root}")
    index.finalize()

    graphs = sum(len(v) for v in index.graph_store.values())
    edges = sum(len(g) for v in index.graph_store.values() for g in v)
    index.meta = {
        "format": {"major": FORMAT_MAJOR, "minor": FORMAT_MINOR},
        "built_at": built_at,
        "dedup": "content-sha256",
        "corpus_hash": hasher.hexdigest(),
        "files_scanned": len(files),
        "files_indexed": files_indexed,
        "duplicate_files": duplicates,
        "functions": function_id,
        "graphs": graphs,
        "edges": edges,
        "mean_edges_per_graph": round(edges / graphs, 3) if graphs else 0.0,
        "mean_graphs_per_function": round(graphs / function_id, 3),
        "unique_variable_names": len(index.name_postings),
        "stopwords": sorted(STOPWORDS),
        "read_failures": read_failures,
        "parse_failures": parse_failures,
    }
    return index


# -- persistence ------------------------------------------------------------------


def _pack_strings(index: CorpusIndex) -> bytes:
    parts = [struct.pack("<I", len(index.strings))]
    for text in index.strings:
        raw = text.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
    return b"".join(parts)


def _pack_graphs(index: CorpusIndex) -> bytes:
    parts = [struct.pack("<I", len(index.graph_store))]
    for nid in sorted(index.graph_store):
        graphs = index.graph_store[nid]
        parts.append(struct.pack("<II", nid, len(graphs)))
        for graph in graphs:
            parts.append(struct.pack("<I", len(graph)))
            for pid, rel in sorted(graph):
                parts.append(struct.pack("<IB", pid, rel))
    return b"".join(parts)


def _pack_edge_postings(index: CorpusIndex) -> bytes:
    parts = [struct.pack("<I", len(index.edge_postings))]
    for (pid, rel) in sorted(index.edge_postings):
        postings = index.edge_postings[(pid, rel)]
        _assert_strictly_sorted(postings)
        parts.append(struct.pack("<IBI", pid, rel, len(postings)))
        for nid, ordinal in postings:
            parts.append(struct.pack("<II", nid, ordinal))
    return b"".join(parts)


def _pack_id_postings(table: dict[int, list[int]]) -> bytes:
    parts = [struct.pack("<I", len(table))]
    for key in sorted(table):
        postings = table[key]
        _assert_strictly_sorted(postings)
        parts.append(struct.pack("<II", key, len(postings)))
        parts.append(struct.pack(f"<{len(postings)}I", *postings))
    return b"".join(parts)


def _assert_strictly_sorted(postings: list) -> None:
    assert all(a < b for a, b in zip(postings, postings[1:])), \
        "posting list must be strictly increasing"


def save_index(index: CorpusIndex, path: str | Path) -> None:
    """Write the index directory (meta.json + index.bin)."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    sections = {
        b"STRT": _pack_strings(index),
        b"GRPH": _pack_graphs(index),
        b"EPST": _pack_edge_postings(index),
        b"NPST": _pack_id_postings(index.name_postings),
        b"FPST": _pack_id_postings(index.fn_name_postings),
        b"TPST": _pack_id_postings(index.token_postings),
    }
    blob = [MAGIC, struct.pack("<HH", FORMAT_MAJOR, FORMAT_MINOR)]
    for tag in _SECTION_ORDER:
        payload = sections[tag]
        blob.append(tag)
        blob.append(struct.pack("<QI", len(payload), zlib.crc32(payload)))
        blob.append(payload)
    (out / "index.bin").write_bytes(b"".join(blob))
    meta = dict(index.meta)
    meta.setdefault("format", {"major": FORMAT_MAJOR, "minor": FORMAT_MINOR})
    (out / "meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n")


class _Reader:
    def __init__(self, blob: bytes, offset: int = 0):
        self.blob = blob
        self.offset = offset

    def take(self, n: int) -> bytes:
        if self.offset + n > len(self.blob):
            raise LoadError(LoadError.TRUNCATED,
                            f"needed {n} bytes at offset {self.offset}")
        out = self.blob[self.offset:self.offset + n]
        self.offset += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_index(path: str | Path) -> CorpusIndex:
    """Load an index directory; raises LoadError with a stable reason."""
    root = Path(path)
    meta_path = root / "meta.json"
    bin_path = root / "index.bin"
    if not bin_path.is_file():
        raise LoadError(LoadError.MALFORMED, f"missing {bin_path}")
    blob = bin_path.read_bytes()
    reader = _Reader(blob)
    if reader.take(len(MAGIC)) != MAGIC:
        raise LoadError(LoadError.BAD_MAGIC, str(bin_path))
    major, minor = reader.unpack("<HH")
    if major != FORMAT_MAJOR:
        raise LoadError(LoadError.VERSION_MISMATCH,
                        f"file major {major}, supported {FORMAT_MAJOR}")
    payloads: dict[bytes, bytes] = {}
    for tag in _SECTION_ORDER:
        found = reader.take(4)
        if found != tag:
            raise LoadError(LoadError.MALFORMED,
                            f"expected section {tag!r}, found {found!r}")
        length, crc = reader.unpack("<QI")
        payload = reader.take(length)
        if zlib.crc32(payload) != crc:
            raise LoadError(LoadError.CHECKSUM, f"section {tag.decode()}")
        payloads[tag] = payload
    if reader.offset != len(blob):
        raise LoadError(LoadError.MALFORMED, "trailing bytes after last section")

    index = CorpusIndex()
    reader = _Reader(payloads[b"STRT"])
    (count,) = reader.unpack("<I")
    for _ in range(count):
        (length,) = reader.unpack("<I")
        index.strings.append(reader.take(length).decode("utf-8"))
    index.string_ids = {s: i for i, s in enumerate(index.strings)}

    reader = _Reader(payloads[b"GRPH"])
    (count,) = reader.unpack("<I")
    for _ in range(count):
        nid, n_graphs = reader.unpack("<II")
        graphs = []
        for _ in range(n_graphs):
            (n_edges,) = reader.unpack("<I")
            edges = frozenset(reader.unpack("<IB") for _ in range(n_edges))
            graphs.append(edges)
        index.graph_store[nid] = graphs

    reader = _Reader(payloads[b"EPST"])
    (count,) = reader.unpack("<I")
    for _ in range(count):
        pid, rel, n = reader.unpack("<IBI")
        index.edge_postings[(pid, rel)] = [reader.unpack("<II") for _ in range(n)]

    for tag, table in ((b"NPST", index.name_postings),
                       (b"FPST", index.fn_name_postings),
                       (b"TPST", index.token_postings)):
        reader = _Reader(payloads[tag])
        (count,) = reader.unpack("<I")
        for _ in range(count):
            key, n = reader.unpack("<II")
            table[key] = list(reader.unpack(f"<{n}I"))

    if meta_path.is_file():
        try:
            index.meta = json.loads(meta_path.read_text())
        except json.JSONDecodeError as exc:
            raise LoadError(LoadError.MALFORMED, f"meta.json: {exc}") from None
    return index
