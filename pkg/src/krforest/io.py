"""CSV datasets and the binary-exact model file format.

CSV layout: a header row naming ``f0 .. f{p-1}``, then either
``t0 .. t{q-1}`` (Euclidean targets) or ``angle_deg`` (circular targets,
degrees), and optionally a trailing ``group`` column of integer ids.

Model files start with one ASCII header line::

    KRFOREST-MODEL <version> sha256=<hex digest of the payload>

followed by a canonical JSON payload. Every real number is written as a
``float.hex`` string, so a round trip is bit-exact and re-saving a loaded
model reproduces the same bytes.
"""
import csv
import hashlib
import json
import os
import tempfile

import numpy as np

from .dataset import Dataset
from .exceptions import CsvParseError, ModelFormatError
from .forest import Forest, ForestConfig
from .linear import OvrClassifier
from .targets import TargetSpace, wrap_angle
from .tree import (AxisThreshold, Binary, Internal, KrfAdaptive, KrfFixed, Leaf,
                   LinearRule, TreeConfig)

MAGIC = "KRFOREST-MODEL"
FORMAT_VERSION = 1


def atomic_write(path, data):
    """Write ``data`` (bytes or str) to ``path`` via a temp file and rename."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- CSV ---------------------------------------------------------------------

def _parse_header(header):
    names = [h.strip() for h in header]
    p = _feature_count(names)
    rest = names[p:]
    groups = bool(rest) and rest[-1] == "group"
    if groups:
        rest = rest[:-1]
    if not rest:
        raise CsvParseError("no target columns (expected t0, ... or angle_deg)", row=1)
    if rest == ["angle_deg"]:
        space = TargetSpace.circular()
    else:
        q = 0
        while q < len(rest) and rest[q] == f"t{q}":
            q += 1
        if q == 0 or q != len(rest):
            bad = p + q + 1
            raise CsvParseError(f"unexpected column name {names[p + q]!r}", row=1, column=bad)
        space = TargetSpace.euclidean(q)
    return p, space, groups


def _read_rows(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise CsvParseError("missing header row", row=1)
    return rows


def _feature_count(header):
    p = 0
    while p < len(header) and header[p].strip() == f"f{p}":
        p += 1
    if p == 0:
        raise CsvParseError("no feature columns (expected f0, f1, ...)", row=1)
    return p


def _numeric(rows, width):
    body = [(i, r) for i, r in enumerate(rows[1:], start=2) if any(c.strip() for c in r)]
    if not body:
        raise CsvParseError("dataset has no rows")
    values = np.empty((len(body), width))
    for k, (lineno, row) in enumerate(body):
        if len(row) != len(rows[0]):
            raise CsvParseError(f"expected {len(rows[0])} fields, found {len(row)}", row=lineno)
        for col in range(width):
            cell = row[col]
            try:
                values[k, col] = float(cell)
            except ValueError:
                raise CsvParseError(f"not a number: {cell!r}", row=lineno, column=col + 1) from None
            if not np.isfinite(values[k, col]):
                raise CsvParseError(f"non-finite value {cell!r}", row=lineno, column=col + 1)
    return values


def load_features(path):
    """Read only the ``f*`` columns of a CSV file as an ``(n, p)`` array."""
    rows = _read_rows(path)
    return _numeric(rows, _feature_count(rows[0]))


def load_csv(path, circular=False):
    """Read a :class:`Dataset`; circular targets are converted to radians.

    With ``circular=True`` a single ``t0`` column is read as angles in degrees.
    """
    rows = _read_rows(path)
    p, space, has_groups = _parse_header(rows[0])
    if circular and not space.is_circular:
        if space.q != 1:
            raise CsvParseError("circular targets need exactly one target column", row=1)
        space = TargetSpace.circular()
    width = len(rows[0])
    values = _numeric(rows, width)
    X = values[:, :p]
    T = values[:, p:p + space.q]
    if space.is_circular:
        T = np.radians(T)
    groups = None
    if has_groups:
        g = values[:, -1]
        if not np.all(g == np.round(g)):
            raise CsvParseError("group ids must be integers", column=width)
        groups = g.astype(np.int64)
    return Dataset(X, T, space, groups)


def _fmt(x):
    return repr(float(x))


def dataset_to_csv(dataset):
    p = dataset.n_features
    header = [f"f{i}" for i in range(p)]
    if dataset.space.is_circular:
        header.append("angle_deg")
        T = np.degrees(dataset.targets)
    else:
        header.extend(f"t{i}" for i in range(dataset.space.q))
        T = dataset.targets
    if dataset.groups is not None:
        header.append("group")
    lines = [",".join(header)]
    for i in range(len(dataset)):
        cells = [_fmt(v) for v in dataset.features[i]] + [_fmt(v) for v in T[i]]
        if dataset.groups is not None:
            cells.append(str(int(dataset.groups[i])))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def save_csv(dataset, path):
    atomic_write(path, dataset_to_csv(dataset))


# -- model files ---------------------------------------------------------------

def _hex(a):
    return [float(v).hex() for v in np.asarray(a, dtype=np.float64).ravel()]


def _unhex(values, shape=None):
    a = np.array([float.fromhex(v) for v in values], dtype=np.float64)
    return a if shape is None else a.reshape(shape)


def _space_to_dict(space):
    return {"kind": space.kind, "q": space.q}


def _splitter_to_dict(s):
    if isinstance(s, KrfFixed):
        return {"type": "krf", "k": s.k}
    if isinstance(s, KrfAdaptive):
        return {"type": "akrf", "k_min": s.k_min, "k_max": s.k_max}
    return {"type": "brf"}


def _splitter_from_dict(d):
    if d["type"] == "krf":
        return KrfFixed(d["k"])
    if d["type"] == "akrf":
        return KrfAdaptive(d["k_min"], d["k_max"])
    if d["type"] == "brf":
        return Binary()
    raise ModelFormatError(f"unknown splitter type {d['type']!r}")


def _config_to_dict(config):
    tc = config.tree_config
    return {
        "num_trees": config.num_trees,
        "bagging_ratio_beta": float(config.bagging_ratio_beta).hex(),
        "seed": int(config.seed),
        "tree": {
            "splitter": _splitter_to_dict(tc.splitter),
            "min_samples_leaf": tc.min_samples_leaf,
            "penalty_c": float(tc.penalty_c).hex(),
            "feature_ratio_gamma": float(tc.feature_ratio_gamma).hex(),
            "seed": int(tc.seed),
            "max_depth": tc.max_depth,
            "svm_tolerance": float(tc.svm_tolerance).hex(),
            "kmeans_max_iters": tc.kmeans_max_iters,
            "kmeans_restarts": tc.kmeans_restarts,
        },
    }


def _config_from_dict(d):
    t = d["tree"]
    tc = TreeConfig(
        splitter=_splitter_from_dict(t["splitter"]),
        min_samples_leaf=t["min_samples_leaf"],
        penalty_c=float.fromhex(t["penalty_c"]),
        feature_ratio_gamma=float.fromhex(t["feature_ratio_gamma"]),
        seed=t["seed"],
        max_depth=t["max_depth"],
        svm_tolerance=float.fromhex(t["svm_tolerance"]),
        kmeans_max_iters=t["kmeans_max_iters"],
        kmeans_restarts=t["kmeans_restarts"],
    )
    return ForestConfig(d["num_trees"], float.fromhex(d["bagging_ratio_beta"]), tc, d["seed"])


def _node_to_dict(node):
    if isinstance(node, Leaf):
        return {"leaf": _hex(node.estimate), "n": int(node.sample_count),
                "degenerate": bool(node.degenerate)}
    rule = node.rule
    if isinstance(rule, LinearRule):
        w = rule.classifier.weights
        r = {"type": "linear", "shape": list(w.shape), "weights": _hex(w),
             "c": float(rule.classifier.penalty_c).hex()}
    else:
        r = {"type": "axis", "dim": int(rule.dim), "threshold": float(rule.threshold).hex()}
    return {"rule": r, "children": [_node_to_dict(c) for c in node.children]}


def _node_from_dict(d):
    if "leaf" in d:
        return Leaf(_unhex(d["leaf"]), d["n"], d["degenerate"])
    r = d["rule"]
    if r["type"] == "linear":
        rule = LinearRule(OvrClassifier(_unhex(r["weights"], tuple(r["shape"])),
                                        float.fromhex(r["c"])))
    elif r["type"] == "axis":
        rule = AxisThreshold(r["dim"], float.fromhex(r["threshold"]))
    else:
        raise ModelFormatError(f"unknown rule type {r['type']!r}")
    children = tuple(_node_from_dict(c) for c in d["children"])
    if len(children) != rule.num_children:
        raise ModelFormatError("child count does not match the split rule")
    return Internal(rule, children)


def model_to_bytes(forest):
    payload = {
        "format": MAGIC,
        "version": FORMAT_VERSION,
        "space": _space_to_dict(forest.space),
        "n_features": forest.n_features,
        "config": _config_to_dict(forest.config),
        "trees": [_node_to_dict(t) for t in forest.trees],
    }
    body = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("ascii")
    digest = hashlib.sha256(body).hexdigest()
    return f"{MAGIC} {FORMAT_VERSION} sha256={digest}\n".encode("ascii") + body


def model_from_bytes(data):
    head, sep, body = data.partition(b"\n")
    if not sep:
        raise ModelFormatError("truncated model file: missing header line")
    try:
        magic, version, digest = head.decode("ascii").split(" ")
    except (UnicodeDecodeError, ValueError):
        raise ModelFormatError("malformed header line") from None
    if magic != MAGIC:
        raise ModelFormatError("not a krforest model file")
    if version != str(FORMAT_VERSION):
        raise ModelFormatError(f"unsupported format version {version}")
    if not digest.startswith("sha256=") or hashlib.sha256(body).hexdigest() != digest[7:]:
        raise ModelFormatError("checksum mismatch: file is corrupt or truncated")
    try:
        d = json.loads(body)
        space = TargetSpace(d["space"]["kind"], d["space"]["q"])
        trees = tuple(_node_from_dict(t) for t in d["trees"])
        return Forest(trees, space, d["n_features"], _config_from_dict(d["config"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model payload: {exc}") from None


def save_model(forest, path):
    atomic_write(path, model_to_bytes(forest))


def load_model(path):
    with open(path, "rb") as fh:
        return model_from_bytes(fh.read())


def write_predictions(path, pred, space):
    if space.is_circular:
        header, values = "angle_deg", np.degrees(wrap_angle(pred))
    else:
        header, values = ",".join(f"t{i}" for i in range(space.q)), pred
    lines = [header] + [",".join(_fmt(v) for v in row) for row in values]
    atomic_write(path, "\n".join(lines) + "\n")
