from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgmine.eventlog import (
    EventLog,
    LogParseError,
    empirical_distribution,
    filter_by_frequency,
    parse_log,
    parse_xes,
    read_log,
    serialize_log,
    serialize_xes,
)

from helpers import DATA

actions = st.sampled_from(["a", "b", "c", "d", "e"])
traces = st.lists(actions, max_size=5).map(tuple)
logs = st.dictionaries(traces, st.integers(1, 50), min_size=1, max_size=8).map(EventLog)


def test_parse_example(example_log):
    assert example_log.total == 1493
    assert len(example_log) == 3
    assert example_log.alphabet == {"a", "b", "c", "d", "e"}
    assert example_log[("b", "b", "b", "d")] == 164


def test_parse_empty_text():
    log = parse_log("")
    assert len(log) == 0
    assert log.total == 0


def test_repeated_variants_accumulate():
    log = parse_log("2;a\n3;a")
    assert dict(log) == {("a",): 5}


def test_empty_trace_and_comments():
    log = parse_log("# header\n\n4;\n1;x\n")
    assert log[()] == 4
    assert log.total == 5


@pytest.mark.parametrize(
    "text, lineno",
    [("3;a\nab\n", 2), ("x;a", 1), ("0;a", 1), ("-2;a", 1), ("1;a,,b", 1)],
)
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(LogParseError, match=f"line {lineno}"):
        parse_log(text)


def test_read_log_file():
    assert read_log(DATA / "example.log").total == 1493


XES_TWO = """<?xml version="1.0" encoding="UTF-8"?>
<log xes.version="1.0" xmlns="http://www.xes-standard.org/">
  <string key="concept:name" value="demo"/>
  <trace>
    <string key="concept:name" value="case1"/>
    <event><string key="concept:name" value="a"/><date key="time:timestamp" value="2020-01-01T00:00:00"/></event>
    <event><string key="concept:name" value="b"/></event>
  </trace>
  <trace>
    <event><string key="org:resource" value="r"/><string key="concept:name" value="a"/></event>
    <event><string key="concept:name" value="b"/></event>
  </trace>
</log>"""


def test_xes_identical_traces_accumulate():
    assert dict(parse_xes(XES_TWO)) == {("a", "b"): 2}


def test_xes_empty_trace():
    log = parse_xes("<log><trace></trace></log>")
    assert dict(log) == {(): 1}


def test_xes_matches_plain_format(example_log):
    assert parse_xes(serialize_xes(example_log)) == example_log


@pytest.mark.parametrize(
    "text",
    ["<log><trace>", "<log><trace><event><int key='x' value='1'/></event></trace></log>", "<foo/>"],
)
def test_xes_errors(text):
    with pytest.raises(LogParseError):
        parse_xes(text)


def test_empirical_distribution_values(example_log):
    dist = empirical_distribution(example_log)
    assert dist[("a", "c", "e", "c")] == Fraction(1057, 1493)
    assert float(dist[("a", "c", "e", "c")]) == pytest.approx(0.708, abs=5e-4)
    assert float(dist[("a", "b", "c", "e")]) == pytest.approx(0.182, abs=5e-4)
    assert float(dist[("b", "b", "b", "d")]) == pytest.approx(0.110, abs=5e-4)


def test_empirical_single_variant():
    assert empirical_distribution(EventLog({("a",): 7})) == {("a",): 1}


def test_empirical_empty_log():
    with pytest.raises(ValueError):
        empirical_distribution(EventLog())


def test_filter_drops_rare_variant(example_log):
    kept = filter_by_frequency(example_log, 0.89)
    assert dict(kept) == {("a", "c", "e", "c"): 1057, ("a", "b", "c", "e"): 272}


def test_filter_full_and_zero(example_log):
    assert filter_by_frequency(example_log, 1.0) == example_log
    assert filter_by_frequency(example_log, 0.0) == example_log


def _cumulative_oracle(log, f):
    ranked = sorted(log.items(), key=lambda kv: (-kv[1], kv[0]))
    for i in range(1, len(ranked) + 1):
        if sum(m for _, m in ranked[:i]) / log.total >= f:
            return dict(ranked[:i])
    return dict(ranked)


def test_filter_095_keeps_all(example_log):
    expected = _cumulative_oracle(example_log, 0.95)
    assert len(expected) == 3
    assert dict(filter_by_frequency(example_log, 0.95)) == expected


def test_filter_ties_are_lexicographic():
    log = EventLog({("b",): 5, ("a",): 5, ("c",): 1})
    assert dict(filter_by_frequency(log, 0.4)) == {("a",): 5}


@settings(max_examples=200, deadline=None)
@given(logs, st.floats(0.0, 1.0))
def test_filter_is_minimal_sub_multiset(log, f):
    kept = filter_by_frequency(log, f)
    for t, m in kept.items():
        assert log[t] == m
    if f > 0:
        assert kept.total / log.total >= f - 1e-9
        # dropping the least frequent kept variant must fall below f
        if len(kept) > 1:
            smallest = min(kept.values())
            assert (kept.total - smallest) / log.total < f


@settings(max_examples=200, deadline=None)
@given(logs)
def test_plain_round_trip(log):
    assert parse_log(serialize_log(log)) == log


@settings(max_examples=100, deadline=None)
@given(logs)
def test_distribution_sums_to_one(log):
    assert sum(empirical_distribution(log).values()) == 1


def test_serialize_rejects_reserved_characters():
    with pytest.raises(ValueError):
        serialize_log(EventLog({("a;b",): 1}))
