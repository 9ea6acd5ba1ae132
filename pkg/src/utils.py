import json
import os
from fractions import Fraction

from loguru import logger


def parse_rational(value):
    """
    Parse an exact rational
    Args:
        value: int, Fraction, or a string such as "-3", "7/11"
    Returns:
        Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if text.count("/") > 1 or not text:
            raise ValueError(f"not a rational: {value!r}")
        num, _, den = text.partition("/")
        try:
            return Fraction(int(num), int(den) if den else 1)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q):
    """int when integral, 'p/q' string otherwise"""
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_poly_text(text):
    """
    Parse coefficients, lowest degree first, written as a JSON array or a
    comma-separated list
    Returns:
        list of Fraction
    """
    text = text.strip()
    if text.startswith("["):
        values = json.loads(text)
    else:
        values = [v for v in text.replace("\n", ",").split(",") if v.strip()]
    if not values:
        raise ValueError("empty coefficient list")
    return [parse_rational(v) for v in values]


def read_poly_file(path):
    with open(path, "r") as f:
        lines = [line for line in f if line.strip() and not line.lstrip().startswith("#")]
    return parse_poly_text(",".join(line.strip().rstrip(",") for line in lines))


def dump_json(data):
    """Deterministic JSON text for reports"""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_json(data, path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(dump_json(data))
    logger.info(f"Wrote {path}")


def create_directories(*paths):
    """
    Create directories used by the application
    Args:
        paths: directories to create; empty entries are ignored
    """
    for directory in paths:
        if not directory:
            continue
        try:
            os.makedirs(directory, exist_ok=True)
        except OSError as e:
            logger.error(f"Error creating directory {directory}: {e}")


def format_time_duration(seconds):
    """
    Format time duration in human-readable format
    Args:
        seconds: Duration in seconds
    Returns:
        Formatted time string
    """
    hours = int(seconds // 3600)
    minutes = int((seconds % 3600) // 60)
    secs = seconds % 60

    if hours > 0:
        return f"{hours}h {minutes}m {int(secs)}s"
    elif minutes > 0:
        return f"{minutes}m {int(secs)}s"
    else:
        return f"{secs:.2f}s"
