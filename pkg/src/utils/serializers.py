import os
import json
import math
import logging
import tempfile
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd

from src.utils.config_manager import CONFIG

logger = logging.getLogger(__name__)

DIGITS = int(CONFIG.get("output.digits", 12))


def round_sig(x: float, digits: int = DIGITS) -> float:
    """保留 digits 位有效数字。非有限值原样返回。"""
    x = float(x)
    if not math.isfinite(x) or x == 0.0:
        return x
    return float(f"{x:.{digits}g}")


def to_jsonable(obj: Any) -> Any:
    """
    递归转成可写入 JSON 的结构：浮点数保留 12 位有效数字，
    ±∞ 写成字符串 "inf" / "-inf" (标准 JSON 没有无穷)。
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return round_sig(x)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), ensure_ascii=False, indent=2) + "\n"


def atomic_write_text(path: Union[str, Path], text: str):
    """先写同目录下的临时文件，再 os.replace 原子替换。"""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.info(f"Wrote {path}")


def write_json(obj: Any, path: Union[str, Path]):
    atomic_write_text(path, dumps(obj))


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=f"%.{DIGITS}g", lineterminator="\n")


def write_csv(frame: pd.DataFrame, path: Union[str, Path]):
    atomic_write_text(path, frame_to_csv(frame))
