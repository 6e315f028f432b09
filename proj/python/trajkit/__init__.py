"""Parallel trajectory preprocessing."""

import json as _json
import os as _os

from ._trajkit import (
    ColumnMapping,
    ConfigError,
    Frame,
    IoError,
    SegmentError,
    StepError,
    TrajkitError,
    ValidationError,
    hampel_filter,
    hampel_mask,
    haversine_m,
    interpolate,
    kinematic_features,
    read_csv,
    registered_ops,
    stream_seed,
    temporal_features,
    write_csv,
)
from ._trajkit import _run_pipeline

__version__ = "0.1.0"


def run_pipeline(frame, pipeline, layer=None, threads=None, seed=None):
    """Run a pipeline given as a dict, a JSON string or a path.

    Returns (frame, report) where report is a dict.
    """
    if isinstance(pipeline, dict):
        text = _json.dumps(pipeline)
    elif isinstance(pipeline, (str, _os.PathLike)) and _os.path.exists(pipeline):
        with open(pipeline, encoding="utf-8") as f:
            text = f.read()
    else:
        text = str(pipeline)
    out, report = _run_pipeline(frame, text, _os.fspath(layer) if layer else "", threads, seed)
    return out, _json.loads(report)
