from .evaluate import CLASSIFIERS, EvalResult, evaluate, parse_classifier, stratified_split
from .logistic import LogisticConfig, train_logistic
from .svm import SVMConfig, train_svm
from .tree import ForestConfig, TreeConfig, train_forest, train_tree

__all__ = [
    "CLASSIFIERS",
    "EvalResult",
    "ForestConfig",
    "LogisticConfig",
    "SVMConfig",
    "TreeConfig",
    "evaluate",
    "parse_classifier",
    "stratified_split",
    "train_forest",
    "train_logistic",
    "train_svm",
    "train_tree",
]
