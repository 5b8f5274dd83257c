"""On-disk table cache: round trip, version stamps and damaged files."""

import json

from orbitoda.cache import ENV_VAR, TableCache, cache_key, default_cache_dir

REQUEST = {"cmd": "characters", "d": 2, "K": [2]}
TABLE = {"table": [["1", "-1"], ["1", "1"]]}


def test_round_trip(tmp_path):
    cache = TableCache(tmp_path, version="1")
    path = cache.store(REQUEST, TABLE)
    assert path.exists() and path.name == f"{cache_key(REQUEST, '1')}.json"
    assert cache.load(REQUEST) == TABLE
    assert json.loads(path.read_text())["request"] == REQUEST


def test_get_or_compute_hits_after_a_miss(tmp_path):
    cache = TableCache(tmp_path, version="1")
    calls = []

    def compute():
        calls.append(1)
        return TABLE

    assert cache.get_or_compute(REQUEST, compute) == (TABLE, False)
    assert cache.get_or_compute(REQUEST, compute) == (TABLE, True)
    assert len(calls) == 1


def test_version_mismatch_is_ignored(tmp_path, capsys):
    TableCache(tmp_path, version="1").store(REQUEST, TABLE)
    newer = TableCache(tmp_path, version="2")
    assert newer.load(REQUEST) is None  # different key
    path = TableCache(tmp_path, version="1").path(REQUEST)
    blob = json.loads(path.read_text())
    blob["version"] = "0"
    path.write_text(json.dumps(blob))
    assert TableCache(tmp_path, version="1").load(REQUEST) is None
    assert "version" in capsys.readouterr().err


def test_corrupted_file_is_recomputed(tmp_path, capsys):
    cache = TableCache(tmp_path, version="1")
    cache.store(REQUEST, TABLE)
    cache.path(REQUEST).write_text("{not json")
    table, hit = cache.get_or_compute(REQUEST, lambda: TABLE)
    assert table == TABLE and not hit
    assert "warning" in capsys.readouterr().err
    assert cache.load(REQUEST) == TABLE


def test_request_mismatch_counts_as_corruption(tmp_path, capsys):
    cache = TableCache(tmp_path, version="1")
    path = cache.store(REQUEST, TABLE)
    blob = json.loads(path.read_text())
    blob["request"]["d"] = 3
    path.write_text(json.dumps(blob))
    assert cache.load(REQUEST) is None
    assert "corrupted" in capsys.readouterr().err


def test_disabled_cache(tmp_path):
    cache = TableCache(None)
    assert cache.store(REQUEST, TABLE) is None
    assert cache.get_or_compute(REQUEST, lambda: TABLE) == (TABLE, False)


def test_directory_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert default_cache_dir() == tmp_path
