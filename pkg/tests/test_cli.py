import io
import json

import pytest

from credible import formats
from credible.cli import run
from credible.random_games import random_finite_game


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_credible_verify_pstar(fx):
    code, out, _ = call("credible", "verify", fx("twice_cde.game"), fx("pstar.profile"))
    assert code == 1
    assert "player row" in out and "(C,C) and (C,D)" in out and "3 vs 1" in out


def test_spne_verify_pstar(fx):
    assert call("spne", "verify", fx("twice_cde.game"), fx("pstar.profile"))[0] == 0


def test_auto_grim_credible(fx):
    assert call("auto", "credible", fx("pd.game"), fx("grim.auto"), "--delta", "3/5")[0] == 1
    assert call("auto", "spne", fx("pd.game"), "grim-trigger", "--delta", "3/5")[0] == 0
    assert call("auto", "credible", fx("pd.game"), "always-defect", "--delta", "1/4")[0] == 0


def test_unique_pd(fx):
    code, out, _ = call("unique", fx("pd_repeated.game"))
    assert code == 0
    assert out.strip() == "unique credible equilibrium: always (D,D)"


def test_unique_not_applicable(fx):
    code, out, _ = call("unique", fx("twice_cde.game"))
    assert code == 1 and "t=1" in out


def test_nash_check(fx):
    code, out, _ = call("nash", fx("non_nash.game"), "--stage", "1", "--check", "B,B")
    assert code == 1 and "col gains 1 by playing A (3 vs 2)" in out


def test_nash_census_mixed(fx):
    code, out, _ = call("nash", fx("twice_cde.game"))
    assert code == 0 and "(D:3/4 E:1/4, D:3/4 E:1/4)" in out


def test_values_fractions(fx):
    code, out, _ = call("auto", "values", fx("pd.game"), "grim-trigger", "--delta", "3/5")
    assert code == 0 and "(coop,coop): (15/2, 15/2)" in out and "." not in out.replace("...", "")


def test_enumerate_cap_exit(fx):
    code, out, _ = call("spne", "enumerate", fx("twice_cde.game"), "--cap", "5")
    assert code == 3 and "truncated" in out


def test_enumerate_counts(fx):
    code, out, _ = call("credible", "enumerate", fx("twice_cde.game"), "--format", "structured")
    assert code == 0 and json.loads(out)["count"] == 4


def test_tree_commands(fx):
    assert call("tree", "prop3", fx("tie_copies.tree"))[0] == 1
    assert call("tree", "prop3", fx("take_or_pass.tree"))[0] == 0
    assert call("tree", "credible", fx("tie_copies.tree"), fx("tie_copies_split.strategy"))[0] == 1
    assert call("tree", "spne", fx("tie_copies.tree"), fx("tie_copies_split.strategy"))[0] == 0
    code, out, _ = call("tree", "spne", fx("take_or_pass.tree"))
    assert code == 0 and "SPNE: 1" in out


def test_construct_mixed(fx):
    code, out, _ = call("credible", "construct", fx("mp_twice.game"))
    assert code == 0 and "always (H:1/2 T:1/2, H:1/2 T:1/2)" in out


def test_structured_is_deterministic(fx):
    a = call("credible", "verify", fx("twice_cde.game"), fx("pstar.profile"), "--format", "structured")
    b = call("credible", "verify", fx("twice_cde.game"), fx("pstar.profile"), "--format", "structured")
    assert a == b
    d = json.loads(a[1])
    assert d["verdict"]["pass"] is False


def test_structured_enumeration_stable(tmp_path):
    import random

    g = random_finite_game(random.Random(11), players=(2, 2), horizon=(2, 2))
    formats.save_game(g, tmp_path / "g.game")
    outs = {call("spne", "enumerate", tmp_path / "g.game", "--format", "structured")[1] for _ in range(3)}
    assert len(outs) == 1


@pytest.mark.parametrize("argv", [
    ("credible", "verify", "missing.game", "x.profile"),
    ("nash",),
    ("frobnicate",),
])
def test_input_errors(argv):
    assert call(*argv)[0] == 2


def test_malformed_file(tmp_path):
    f = tmp_path / "bad.game"
    f.write_text('{"players": ["a", "b"], "delta": "1", "horizon": {"kind": "finite", "stages": [\n  {"actions": [["x"]]}]}}')
    code, _, err = call("nash", f)
    assert code == 2 and "actions" in err


def test_invalid_game_reported(tmp_path):
    f = tmp_path / "pd.game"
    doc = json.loads(open(formats.__file__.replace("formats.py", "fixtures/pd.game")).read())
    doc["delta"] = "1"
    f.write_text(json.dumps(doc))
    code, _, err = call("unique", f)
    assert code == 2 and "infinite horizon requires delta < 1" in err


def test_delta_override(fx):
    code, out, _ = call("auto", "spne", fx("pd.game"), "grim-trigger", "--delta", "1/4")
    assert code == 1


def test_selftest():
    code, out, _ = call("selftest", "--seed", "3")
    assert code == 0 and out.count("PASS") == 9
