import pytest
from hypothesis import given

from aritylab.algebra import composition, disjoint_union
from aritylab.config import Config, ConfigError, load_config, parse_config
from aritylab.core import CapExceeded, StructureError, pure_set
from aritylab.dsl import DSLError, dumps, loads
from aritylab.factory import circular_order, linear_order, spherical_chain

from conftest import structures

SAMPLE = """\
# a three element chain
structure chain
size 3
rel K2/2
(0, 1)
(1,2)   # spacing is free
( 0 , 2 )
rel P/1
(1)
"""


def test_parse_sample():
    s = loads(SAMPLE)
    assert s.name == "chain" and s.size == 3
    assert s["K2"] == linear_order(3)["K2"]
    assert s["P"] == {(1,)}


def test_canonical_form():
    text = dumps(loads(SAMPLE))
    assert text.splitlines()[:4] == ["structure chain", "size 3", "rel K2/2", "(0, 1)"]
    assert dumps(loads(text)) == text


def test_builders():
    assert loads("builder circular 5") == circular_order(5)
    assert loads("builder circular 5").name == "circular_5"
    assert loads("builder linear 3") == linear_order(3)
    assert loads("builder pure 4") == pure_set(4)
    assert loads("builder spherical 5 4 --variant allwindows") == spherical_chain(5, 4, "allwindows")
    s = loads("structure c\nbuilder circular 3\nrel P/1\n(0)\n")
    assert s.signature.names == ("K3", "P") and s.name == "c"


@pytest.mark.parametrize("text", [
    "size 3\n(0, 1)\n",
    "size x\n",
    "size 2\nsize 2\n",
    "size 2\nrel K/\n",
    "size 2\nrel K/2\n(0, 1\n",
    "size 2\nbogus\n",
    "builder circular\n",
    "builder hexagon 3\n",
    "builder spherical 5 4 --variant odd\n",
    "rel K/1\n(0)\n",
])
def test_parse_errors(text):
    with pytest.raises(DSLError):
        loads(text)


def test_validation_errors():
    with pytest.raises(StructureError):
        loads("size 2\nrel K/2\n(0, 2)\n")
    with pytest.raises(StructureError):
        loads("size 2\nrel K/2\n(0, 1, 1)\n")
    with pytest.raises(StructureError):
        loads("size 2\nrel K/1\nrel K/1\n")
    with pytest.raises(CapExceeded):
        loads("size 20\n")


def test_combined_names_roundtrip():
    for s in (disjoint_union(linear_order(2), linear_order(2)),
              composition(pure_set(2), circular_order(3))):
        text = dumps(s)
        assert loads(text) == s and loads(text).name == s.name
        assert dumps(loads(text)) == text


@given(structures(max_size=5, max_rels=3))
def test_fixpoint(s):
    text = dumps(s)
    t = loads(text)
    assert t == s
    assert dumps(t) == text


def test_config_parsing(tmp_path):
    cfg = parse_config("cap = 1_000_000\nkmax_default = 3  # comment\nseed = 7\n")
    assert cfg == Config(cap=10**6, kmax_default=3, seed=7)
    assert parse_config("kmax_default = none").kmax_default is None
    for bad in ["cap 5", "colour = 3", "cap = lots", "cap = 0"]:
        with pytest.raises(ConfigError):
            parse_config(bad)
    path = tmp_path / "aritylab.toml"
    path.write_text("seed = 11\n")
    assert load_config(path).seed == 11


def test_config_default_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_config() == Config()
    (tmp_path / "aritylab.toml").write_text("cap = 500\n")
    assert load_config().cap == 500
