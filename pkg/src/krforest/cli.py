"""Command-line interface: ``krforest {gen,train,predict,eval,cv,bench}``."""
import argparse
import json
import sys
import time

import numpy as np

from . import synthetic
from .evaluation import cross_validate, evaluate
from .exceptions import InvalidInputError, ModelFormatError
from .forest import ForestConfig, forest_predict, train_forest
from .io import atomic_write, load_csv, load_features, load_model, save_csv, save_model, \
    write_predictions
from .tree import Binary, KrfAdaptive, KrfFixed, TreeConfig


def _k_range(text):
    lo, _, hi = text.partition(":")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None


def _float_list(text):
    return [float(v) for v in text.split(",") if v]


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def _add_forest_args(p):
    p.add_argument("--splitter", choices=["krf", "akrf", "brf"], default="krf")
    p.add_argument("--k", type=int, default=2, help="children per node for krf")
    p.add_argument("--k-range", type=_k_range, default=(2, 40), metavar="MIN:MAX",
                   help="candidate child counts for akrf")
    p.add_argument("--trees", type=int, default=20)
    p.add_argument("--beta", type=float, default=1.0, help="bagging ratio")
    p.add_argument("--gamma", type=float, default=1.0, help="feature ratio for brf")
    p.add_argument("--min-leaf", type=int, default=5)
    p.add_argument("--penalty-c", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel tree training")


def _forest_config(args, splitter=None, k=None, gamma=None, beta=None):
    splitter = splitter or args.splitter
    if splitter == "krf":
        s = KrfFixed(k if k is not None else args.k)
    elif splitter == "akrf":
        s = KrfAdaptive(*args.k_range)
    else:
        s = Binary()
    tree = TreeConfig(s, min_samples_leaf=args.min_leaf, penalty_c=args.penalty_c,
                      feature_ratio_gamma=gamma if gamma is not None else args.gamma)
    return ForestConfig(args.trees, beta if beta is not None else args.beta, tree, args.seed)


def _describe(config):
    s = config.tree_config.splitter
    if isinstance(s, KrfFixed):
        name = f"krf k={s.k}"
    elif isinstance(s, KrfAdaptive):
        name = f"akrf k={s.k_min}:{s.k_max}"
    else:
        name = f"brf gamma={config.tree_config.feature_ratio_gamma:g}"
    return f"{name} beta={config.bagging_ratio_beta:g}"


def _emit(rows, payload, out=None):
    """Print a plain table followed by one JSON line; optionally save the JSON."""
    width = max(len(r[0]) for r in rows)
    for name, *vals in rows:
        print(f"{name:<{width}}  " + "  ".join(vals))
    text = json.dumps(payload, sort_keys=True)
    print(text)
    if out:
        atomic_write(out, text + "\n")


def _report_rows(label, report):
    return [(label, f"{report.mae:10.4f}", f"{report.mae_p90:10.4f}",
             f"{report.mae_p95:10.4f}", f"{report.n:6d}")]


_HEADER = ("model", f"{'mae':>10}", f"{'mae_p90':>10}", f"{'mae_p95':>10}", f"{'n':>6}")


def cmd_gen(args):
    if args.generator == "piecewise":
        g = synthetic.PiecewiseConstant(args.regions, args.noise, args.q)
    elif args.generator == "blobs":
        if args.circular:
            g = synthetic.CircularBlobs(args.k, args.sigma)
        else:
            g = synthetic.GaussianBlobs(args.k, args.separation, args.sigma)
    else:
        g = synthetic.RotationField(args.noise, args.center_deg, args.spread_deg,
                                    args.feature_noise)
    data = synthetic.generate(synthetic.SyntheticSpec(g, args.n, args.p, args.seed))
    save_csv(data, args.out)
    print(f"wrote {len(data)} samples ({data.n_features} features, {data.space}) to {args.out}")


def cmd_train(args):
    data = load_csv(args.data, circular=args.circular)
    config = _forest_config(args)
    t0 = time.perf_counter()
    forest = train_forest(data, config, n_jobs=args.jobs)
    save_model(forest, args.model)
    print(f"trained {_describe(config)} on {len(data)} samples "
          f"in {time.perf_counter() - t0:.2f}s; saved to {args.model}")


def cmd_predict(args):
    forest = load_model(args.model)
    X = load_features(args.data)
    pred = forest_predict(forest, X)
    write_predictions(args.out, pred, forest.space)
    print(f"wrote {len(X)} predictions to {args.out}")


def cmd_eval(args):
    forest = load_model(args.model)
    data = load_csv(args.data, circular=args.circular or forest.space.is_circular)
    report = evaluate(forest, data)
    _emit([_HEADER] + _report_rows(_describe(forest.config), report),
          {"model": _describe(forest.config), **report.as_dict()}, args.out)


def _grid(args):
    configs = []
    for beta in args.beta_grid or [args.beta]:
        if args.splitter == "krf":
            configs += [_forest_config(args, k=k, beta=beta) for k in args.k_grid or [args.k]]
        elif args.splitter == "brf":
            configs += [_forest_config(args, gamma=g, beta=beta)
                        for g in args.gamma_grid or [args.gamma]]
        else:
            configs.append(_forest_config(args, beta=beta))
    return configs


def cmd_cv(args):
    data = load_csv(args.data, circular=args.circular)
    configs = _grid(args)
    result = cross_validate(data, configs, folds=args.folds, seed=args.seed,
                            by_group=args.by_group, n_jobs=args.jobs)
    rows = [("config", f"{'cv_mae':>10}")]
    rows += [(_describe(c) + (" *" if i == result.best_index else ""), f"{s:10.4f}")
             for i, (c, s) in enumerate(zip(configs, result.scores))]
    _emit(rows, {"best": _describe(result.best_config), "best_index": result.best_index,
                 "scores": {_describe(c): s for c, s in zip(configs, result.scores)}},
          args.out)


def cmd_bench(args):
    data = load_csv(args.data, circular=args.circular)
    rng = np.random.default_rng(args.seed)
    order = rng.permutation(len(data))
    n_test = max(1, int(round(args.test_frac * len(data))))
    train, test = data.subset(np.sort(order[n_test:])), data.subset(np.sort(order[:n_test]))
    rows = [_HEADER + (f"{'train_s':>8}",)]
    payload = {}
    for name in args.models:
        config = _forest_config(args, splitter=name)
        t0 = time.perf_counter()
        forest = train_forest(train, config, n_jobs=args.jobs)
        elapsed = time.perf_counter() - t0
        report = evaluate(forest, test)
        rows += [r + (f"{elapsed:8.2f}",) for r in _report_rows(_describe(config), report)]
        payload[_describe(config)] = {**report.as_dict(), "train_seconds": elapsed}
    _emit(rows, payload, args.out)


def build_parser():
    parser = argparse.ArgumentParser(prog="krforest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic dataset")
    g.add_argument("--generator", choices=["piecewise", "blobs", "rotation"], default="piecewise")
    g.add_argument("--n", type=int, default=500)
    g.add_argument("--p", type=int, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--circular", action="store_true", help="circular blobs")
    g.add_argument("--regions", type=int, default=10)
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--noise", type=float, default=1.0,
                   help="target noise (piecewise) or angle noise in degrees (rotation)")
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--separation", type=float, default=50.0)
    g.add_argument("--sigma", type=float, default=1.0,
                   help="blob spread (degrees for circular blobs)")
    g.add_argument("--center-deg", type=float, default=0.0)
    g.add_argument("--spread-deg", type=float, default=None)
    g.add_argument("--feature-noise", type=float, default=0.05)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("train", help="train a forest and save it")
    t.add_argument("--data", required=True)
    t.add_argument("--circular", action="store_true", help="read t0 as an angle in degrees")
    t.add_argument("--model", required=True)
    _add_forest_args(t)
    t.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict with a saved forest")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    e = sub.add_parser("eval", help="evaluate a saved forest on a labelled dataset")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--circular", action="store_true")
    e.add_argument("--out", help="also write the metrics JSON here")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("cv", help="cross-validate a grid of forest configurations")
    c.add_argument("--data", required=True)
    c.add_argument("--circular", action="store_true")
    c.add_argument("--folds", type=int, default=5)
    c.add_argument("--by-group", action="store_true", help="leave one group out")
    c.add_argument("--k-grid", type=_int_list)
    c.add_argument("--gamma-grid", type=_float_list)
    c.add_argument("--beta-grid", type=_float_list)
    c.add_argument("--out")
    _add_forest_args(c)
    c.set_defaults(func=cmd_cv)

    b = sub.add_parser("bench", help="compare splitters on a train/test split")
    b.add_argument("--data", required=True)
    b.add_argument("--circular", action="store_true")
    b.add_argument("--models", nargs="+", choices=["krf", "akrf", "brf"],
                   default=["krf", "akrf", "brf"])
    b.add_argument("--test-frac", type=float, default=0.25)
    b.add_argument("--out")
    _add_forest_args(b)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (InvalidInputError, ModelFormatError, OSError) as exc:
        print(f"krforest {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
