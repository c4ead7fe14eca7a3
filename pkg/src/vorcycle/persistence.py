"""On-disk caching of graphs, complexes, and verdicts.

Files are JSON with every arbitrary-precision integer serialized as a
decimal string and every rational as "p/q", so exactness survives the
round trip and the files stay diffable.  Each file carries a schema
version and a content hash over the canonical payload encoding; writes
go through a temporary file and an atomic rename.
"""

import hashlib
import json
import os
import tempfile
from .complexes import CellOrbitRec, Differential, VoronoiComplex
from .cones import FacetRec, PolyCone
from .enumeration import Edge, PerfectFormRep, VoronoiGraph
from .forms import GroupElement, MinVecSet, QForm
from .linalg import sym_flatten, sym_dim

SCHEMA_VERSION = 1
PAYLOAD_KINDS = ("graph", "complex", "verdict", "tess-instance")


class CacheCorrupt(ValueError):
    """A cache file failed its schema or hash validation."""


def _enc_mat(rows):
    return [[str(x) for x in r] for r in rows]


def _dec_mat(rows):
    return tuple(tuple(int(x) for x in r) for r in rows)


def _enc_vecs(vecs):
    return [[str(x) for x in v] for v in vecs]


def _dec_vecs(vecs):
    return tuple(tuple(int(x) for x in v) for v in vecs)


def canonical_dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_hash(payload):
    return hashlib.sha256(canonical_dumps(payload).encode()).hexdigest()


def graph_to_payload(graph):
    nodes = []
    for node in graph.nodes:
        facets = []
        if node.domain is not None:
            facets = [{"normal": _enc_mat(f.normal),
                       "incident": sorted(f.incident)}
                      for f in node.domain.facets]
        nodes.append({
            "gram": _enc_mat(node.form.gram),
            "min_value": str(node.minvecs.min_value),
            "min_vectors": _enc_vecs(node.minvecs.vectors),
            "stab_order": node.stab_order,
            "stabilizer": [_enc_mat(g.rows) for g in node.stabilizer],
            "label": node.label,
            "facets": facets,
        })
    return {
        "n": graph.n,
        "group": graph.group_kind,
        "nodes": nodes,
        "edges": [{"node": e.node, "facet": e.facet,
                   "neighbor": e.neighbor,
                   "witness": _enc_mat(e.witness.rows)}
                  for e in graph.edges],
    }


def graph_from_payload(payload):
    from .forms import rank_one
    nodes = []
    n = payload["n"]
    for rec in payload["nodes"]:
        form = QForm(gram=_dec_mat(rec["gram"]))
        mv = MinVecSet(vectors=_dec_vecs(rec["min_vectors"]),
                       min_value=int(rec["min_value"]))
        stab = tuple(GroupElement.from_matrix(_dec_mat(g))
                     for g in rec["stabilizer"])
        domain = None
        if rec["facets"]:
            facets = tuple(FacetRec(normal=_dec_mat(f["normal"]),
                                    incident=frozenset(f["incident"]))
                           for f in rec["facets"])
            flats = tuple(sym_flatten(rank_one(v)) for v in mv.vectors)
            domain = PolyCone(ambient_dim=sym_dim(n), vectors=mv.vectors,
                              ray_flats=flats, facets=facets)
        nodes.append(PerfectFormRep(form=form, minvecs=mv, domain=domain,
                                    stabilizer=stab,
                                    stab_order=rec["stab_order"],
                                    label=rec["label"]))
    edges = tuple(Edge(node=e["node"], facet=e["facet"],
                       neighbor=e["neighbor"],
                       witness=GroupElement.from_matrix(_dec_mat(e["witness"])))
                  for e in payload["edges"])
    return VoronoiGraph(n=n, group_kind=payload["group"],
                        nodes=tuple(nodes), edges=edges)


def _orbit_to_payload(orbit):
    return {
        "level": orbit.level,
        "vectors": _enc_vecs(orbit.vectors),
        "parent": orbit.parent,
        "face_index": orbit.face_index,
        "members": [{"parent": p, "face": f, "vectors": _enc_vecs(v)}
                    for p, f, v in orbit.members],
        "stabilizer": [_enc_mat(g.rows) for g in orbit.stabilizer],
        "stab_order": orbit.stab_order,
        "basis": _enc_vecs(orbit.basis) if orbit.basis is not None else None,
        "orientation_kept": orbit.orientation_kept,
        "kind": orbit.kind,
        "witness": ({"neighbor": orbit.witness[0],
                     "g": _enc_mat(orbit.witness[1])}
                    if orbit.witness else None),
        "label": orbit.label,
    }


def _orbit_from_payload(rec):
    witness = ()
    if rec["witness"] is not None:
        witness = (rec["witness"]["neighbor"],
                   _dec_mat(rec["witness"]["g"]))
    return CellOrbitRec(
        level=rec["level"], vectors=_dec_vecs(rec["vectors"]),
        parent=rec["parent"], face_index=rec["face_index"],
        members=tuple((m["parent"], m["face"], _dec_vecs(m["vectors"]))
                      for m in rec["members"]),
        stabilizer=tuple(GroupElement.from_matrix(_dec_mat(g))
                         for g in rec["stabilizer"]),
        stab_order=rec["stab_order"],
        basis=(_dec_vecs(rec["basis"]) if rec["basis"] is not None else None),
        orientation_kept=rec["orientation_kept"], kind=rec["kind"],
        witness=witness, label=rec["label"])


def complex_to_payload(cx):
    return {
        "n": cx.n,
        "group": cx.group_kind,
        "seed_perm": cx.seed_perm,
        "graph": graph_to_payload(cx.graph),
        "tops": [_orbit_to_payload(t) for t in cx.tops],
        "walls": [_orbit_to_payload(w) for w in cx.walls],
        "kept_tops": list(cx.kept_tops),
        "kept_walls": list(cx.kept_walls),
        "differential": {
            "rows": list(cx.differential.row_labels),
            "cols": list(cx.differential.col_labels),
            "triplets": [[r, c, str(v)]
                         for r, c, v in cx.differential.triplets()],
        },
    }


def complex_from_payload(payload):
    graph = graph_from_payload(payload["graph"])
    diff = Differential(
        row_labels=tuple(payload["differential"]["rows"]),
        col_labels=tuple(payload["differential"]["cols"]),
        entries=tuple(((r, c), int(v))
                      for r, c, v in payload["differential"]["triplets"]))
    return VoronoiComplex(
        n=payload["n"], group_kind=payload["group"],
        seed_perm=payload["seed_perm"], graph=graph,
        tops=tuple(_orbit_from_payload(t) for t in payload["tops"]),
        walls=tuple(_orbit_from_payload(w) for w in payload["walls"]),
        kept_tops=tuple(payload["kept_tops"]),
        kept_walls=tuple(payload["kept_walls"]),
        differential=diff)


def save_payload(path, kind, n, group, payload):
    if kind not in PAYLOAD_KINDS:
        raise ValueError(f"unknown payload kind {kind!r}")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "n": n,
        "group": group,
        "hash": content_hash(payload),
        "payload": payload,
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)),
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def load_payload(path, kind=None, n=None, group=None):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CacheCorrupt(f"{path}: not valid JSON ({exc.msg})") from exc
    for key in ("schema_version", "kind", "hash", "payload"):
        if key not in doc:
            raise CacheCorrupt(f"{path}: missing field {key!r}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise CacheCorrupt(
            f"{path}: schema version {doc['schema_version']} != "
            f"{SCHEMA_VERSION}")
    if content_hash(doc["payload"]) != doc["hash"]:
        raise CacheCorrupt(f"{path}: content hash mismatch")
    if kind is not None and doc["kind"] != kind:
        raise CacheCorrupt(f"{path}: expected kind {kind!r}")
    if n is not None and doc["n"] != n:
        raise CacheCorrupt(f"{path}: expected n={n}")
    if group is not None and doc["group"] != group:
        raise CacheCorrupt(f"{path}: expected group {group!r}")
    return doc["payload"]


def cache_path(cache_dir, kind, n, group, seed_perm=0):
    suffix = f"-p{seed_perm}" if seed_perm else ""
    return os.path.join(cache_dir, f"{kind}-n{n}-{group}{suffix}.json")
