"""Regression forests whose nodes split by clustering the targets."""
from .clustering import Clustering, kmeans
from .dataset import Dataset
from .evaluation import EvalReport, cross_validate, evaluate
from .exceptions import (CsvParseError, DegenerateMeanError, InvalidInputError,
                         ModelFormatError, NotComputableError, SelectionFailedError)
from .forest import Forest, ForestConfig, forest_predict, train_forest
from .io import load_csv, load_model, save_csv, save_model
from .linear import OvrClassifier, predict, train_ovr
from .model_selection import BicScore, bic, select_k
from .targets import TargetSpace, circular_mean, loss, mean
from .tree import Binary, KrfAdaptive, KrfFixed, TreeConfig, grow_tree, tree_predict

__version__ = "0.1.0"

__all__ = [
    "Binary", "BicScore", "Clustering", "CsvParseError", "Dataset", "DegenerateMeanError",
    "EvalReport", "Forest", "ForestConfig", "InvalidInputError", "KrfAdaptive", "KrfFixed",
    "ModelFormatError", "NotComputableError", "OvrClassifier", "SelectionFailedError",
    "TargetSpace", "TreeConfig", "bic", "circular_mean", "cross_validate", "evaluate",
    "forest_predict", "grow_tree", "kmeans", "load_csv", "load_model", "loss", "mean",
    "predict", "save_csv", "save_model", "select_k", "train_forest", "train_ovr",
    "tree_predict",
]
