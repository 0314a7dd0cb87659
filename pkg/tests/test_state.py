import asyncio
import json

import pytest

from prodhyp.state import RunState, format_value


def _fill(state: RunState, records: dict[int, dict]):
    async def inner():
        for idx, record in records.items():
            await state.add_record(idx, record)
        return await state.generate_output()
    return asyncio.run(inner())


def test_format_value():
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(3) == "3"
    assert format_value("x") == "x"

def test_csv_in_index_order():
    state = RunState(["s", "rho"])
    output = _fill(state, {2: {"s": 0.5, "rho": 1.0}, 0: {"s": 0.0, "rho": 2.0}, 1: {"s": 0.25, "rho": 3.0}})
    assert output == "s,rho\n0,2\n0.25,3\n0.5,1\n"
    assert len(state) == 3

def test_json_output():
    state = RunState(["s"], "json")
    output = _fill(state, {1: {"s": 1.0, "extra": [1, 2]}, 0: {"s": 0.0}})
    assert json.loads(output) == [{"s": 0.0}, {"s": 1.0, "extra": [1, 2]}]
    assert output.endswith("\n")

def test_missing_column():
    state = RunState(["s", "rho"])
    with pytest.raises(KeyError):
        _fill(state, {0: {"s": 0.0}})

def test_digest_is_deterministic():
    records = {i: {"s": i / 10, "rho": i * 0.3} for i in range(10)}
    first, second = RunState(["s", "rho"]), RunState(["s", "rho"])
    _fill(first, records)
    _fill(second, dict(reversed(records.items())))
    assert asyncio.run(first.get_digest()) == asyncio.run(second.get_digest())
