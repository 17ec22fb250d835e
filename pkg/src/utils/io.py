"""
CSV and JSON writers
CSV goes through pandas with 17 significant digits; JSON keeps full float
repr precision and writes complex numbers as [re, im] pairs.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.utils.errors import HardyError

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = '%.17g'


def complex_pairs(values: np.ndarray) -> List[List[float]]:
    """[[re, im], ...] for a complex vector"""
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex).ravel()]


def pairs_to_complex(pairs: List[List[float]]) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise HardyError("Complex values must be given as [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _to_builtin(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def to_json(payload: Union[BaseModel, Dict]) -> str:
    data = payload.model_dump() if isinstance(payload, BaseModel) else payload
    return json.dumps(data, indent=2, default=_to_builtin) + "\n"


def write_json(payload: Union[BaseModel, Dict], path: Optional[str] = None) -> None:
    """Write JSON to path, or to stdout when path is None"""
    text = to_json(payload)
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)
    logger.info(f"Wrote {path}")


def write_csv(df: pd.DataFrame, path: Optional[str] = None) -> None:
    """Write a frame with a header row, '.' decimals and 17 significant digits"""
    if path is None:
        df.to_csv(sys.stdout, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    logger.info(f"Wrote {len(df)} rows to {path}")


def write_records(records: Union[pd.DataFrame, List[Dict]], fmt: str, path: Optional[str] = None) -> None:
    """Tabular output in either format; JSON holds a list of row objects"""
    df = records if isinstance(records, pd.DataFrame) else pd.DataFrame(records)
    if fmt == 'csv':
        write_csv(df, path)
    else:
        write_json({'rows': df.to_dict(orient='records')}, path)


def read_json(path: str) -> Dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise HardyError(f"{path} is not valid JSON: {e}")
