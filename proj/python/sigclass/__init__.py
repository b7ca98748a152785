"""Signature-based classification of functional data with scalar covariates.

The heavy lifting lives in the compiled extension ``_sigclass``; this package
re-exports its public surface.
"""

from ._sigclass import (
    Dataset,
    Model,
    fit,
    generate_dataset,
    load_dataset,
    load_model,
    save_dataset,
    save_model,
    sig_dim,
    signature,
    signature_features,
    stratified_split,
)

__all__ = [
    "Dataset",
    "Model",
    "fit",
    "generate_dataset",
    "load_dataset",
    "load_model",
    "save_dataset",
    "save_model",
    "sig_dim",
    "signature",
    "signature_features",
    "stratified_split",
]
