import json

import numpy as np

from hillgreen import BCKind
from hillgreen.io import csv_lines, dumps, fmt_float


def test_fmt_float_roundtrip():
    for x in (0.1, 1 / 3, -2.5e-300, np.pi):
        assert float(fmt_float(x)) == x
    assert fmt_float(float("nan")) == "null"


def test_dumps_is_valid_json_and_deterministic():
    obj = {"a": np.float64(0.1), "b": [np.int64(3), True, None], "bc": BCKind.DIRICHLET, "arr": np.arange(3.0)}
    text = dumps(obj)
    assert text == dumps(obj)
    back = json.loads(text)
    assert back == {"a": 0.1, "b": [3, True, None], "bc": "dirichlet", "arr": [0.0, 1.0, 2.0]}


def test_dumps_nonfinite_is_null():
    assert json.loads(dumps({"x": float("inf")})) == {"x": None}


def test_csv_lines():
    text = csv_lines(["q", "v"], [("K1", 1.5), ("K2", float("nan"))])
    assert text == "q,v\nK1,1.5\nK2,\n"
