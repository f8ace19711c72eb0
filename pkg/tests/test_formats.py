import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credible import formats
from credible.automaton import preset_profile
from credible.formats import FormatError
from credible.model import BehaviorProfile, MultiStageGame
from credible.random_games import random_finite_game, random_tree

FIXTURES = ["twice_cde.game", "non_nash.game", "pd_repeated.game", "twice_pd.game", "mp_twice.game", "mp_repeated.game"]


@pytest.mark.parametrize("name", FIXTURES)
def test_game_fixture_round_trip(fx, name, tmp_path):
    g = formats.load_game(fx(name))
    out = tmp_path / name
    formats.save_game(g, out)
    assert formats.load_game(out) == g
    assert out.read_text() == open(fx(name)).read()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_game_round_trip(seed):
    g = random_finite_game(random.Random(seed))
    text = formats.dumps(formats.game_to_dict(g))
    assert formats.game_from_dict(json.loads(text)) == g
    assert formats.dumps(formats.game_to_dict(formats.game_from_dict(json.loads(text)))) == text


def test_profile_round_trip(fx, tmp_path):
    p = formats.load_profile(fx("pstar.profile"))
    formats.save_profile(p, tmp_path / "p")
    assert formats.load_profile(tmp_path / "p") == p


def test_infinite_game_equality(fx):
    g = formats.load_game(fx("pd_repeated.game"))
    assert not g.is_finite and g.delta == formats.game_from_dict(formats.game_to_dict(g)).delta


def test_automata_round_trip(pd):
    prof = preset_profile(pd, "tit-for-tat")
    assert formats.automata_from_dict(formats.automata_to_dict(prof, pd), pd) == prof


def test_automata_default_transition(pd):
    d = {"players": [{"states": ["s"], "initial": "s", "output": {"s": "D"}, "transition": {"s": {"*": "s"}}}] * 2}
    assert len(formats.automata_from_dict(d, pd)) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_tree_round_trip(seed):
    t = random_tree(random.Random(seed))
    assert formats.tree_from_dict(json.loads(formats.dumps(formats.tree_to_dict(t)))).root == t.root


def test_strategy_round_trip(fx):
    s = formats.load_strategy(fx("tie_copies_split.strategy"))
    assert formats.strategy_from_dict(formats.strategy_to_dict(s)) == s


def test_bad_json_position(tmp_path):
    f = tmp_path / "g.game"
    f.write_text('{\n  "players": [\n}')
    with pytest.raises(FormatError, match="line 3"):
        formats.load_game(f)


@pytest.mark.parametrize("doc,msg", [
    ({"delta": "1", "horizon": {"kind": "finite", "stages": []}}, "missing field 'players'"),
    ({"players": ["a"], "delta": "x", "horizon": {"kind": "finite", "stages": []}}, "game.delta"),
    ({"players": ["a"], "delta": "1", "horizon": {"kind": "weird"}}, "horizon.kind"),
    ({"players": ["a"], "delta": "1", "horizon": {"kind": "finite", "stages": [{"actions": [["x"]],
      "payoffs": ["1"]}]}}, r"payoffs\[0\]"),
])
def test_field_diagnostics(doc, msg):
    with pytest.raises(FormatError, match=msg):
        formats.game_from_dict(doc)


def test_float_payoff_rejected():
    doc = {"players": ["a"], "delta": "1", "horizon": {"kind": "finite", "stages": [
        {"actions": [["x"]], "payoffs": [[0.5]]}]}}
    with pytest.raises(FormatError, match="not a rational"):
        formats.game_from_dict(doc)


def test_profile_time_mismatch():
    with pytest.raises(FormatError, match="time"):
        formats.profile_from_list([{"time": 3, "history": [], "play": ["C", "C"]}])
