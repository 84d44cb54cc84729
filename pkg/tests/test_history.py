import pytest

from blockcalc.history import RunHistory


@pytest.fixture
def db(tmp_path):
    with RunHistory(tmp_path / "history.db") as history:
        yield history


def test_run_lifecycle(db, tmp_path):
    run_id = db.start_run("experiment", "table3", {"seed": 1}, tmp_path / "x.log")
    db.add_files(run_id, [tmp_path / "table3.csv", tmp_path / "table3_plot.py"])
    db.finish_run(run_id, "ok")

    (run,) = db.get_recent_runs()
    assert run["command"] == "experiment"
    assert run["status"] == "ok"
    assert run["file_count"] == 2
    assert run["end_time"] is not None
    assert db.get_run_files(run_id) == [str(tmp_path / "table3.csv"), str(tmp_path / "table3_plot.py")]


def test_recent_runs_newest_first(db):
    ids = [db.start_run("fit", f"m{i}.csv") for i in range(5)]
    assert [r["id"] for r in db.get_recent_runs(limit=3)] == ids[::-1][:3]


def test_cleanup_keeps_starred_runs(db):
    ids = [db.start_run("simulate") for _ in range(6)]
    db.add_files(ids[0], ["old.csv"])
    db.star_run(ids[1])

    assert db.cleanup_old_runs(keep_recent=2) == 3
    remaining = {r["id"] for r in db.get_recent_runs(limit=10)}
    assert remaining == {ids[1], ids[4], ids[5]}
    assert db.get_run_files(ids[0]) == []


def test_cleanup_everything(db):
    db.start_run("fit")
    assert db.cleanup_old_runs(keep_recent=0) == 1
    assert db.get_recent_runs() == []


def test_star_reports_missing_run(db):
    run_id = db.start_run("fit")
    assert db.star_run(run_id) is True
    assert db.get_recent_runs()[0]["starred"]
    assert db.star_run(999) is False
