import pytest

from photonic_molecules.errors import ConfigurationError
from photonic_molecules.Frontend import Frontend, MsgType
from photonic_molecules.RequestedParameters import (
    Importance,
    ParameterNotFoundError,
    ParameterRequest,
    RequestedParameter,
    RequestedParameterDict,
    RequestedParametersParser,
    UnknownParameterError,
    apply_override,
    flatten_keys,
    lookup,
    parse_override,
    reject_unknown,
)

CONFIG = {"scenario": "spectrum", "params": {"xi": 0.2, "Delta_over_gamma": -12.0}, "numerics": {"n_points": 512}}


def test_lookup():
    assert lookup(CONFIG, "params.xi") == 0.2
    assert lookup(CONFIG, "numerics.dt", None) is None
    with pytest.raises(KeyError):
        lookup(CONFIG, "params.xi.value")


def test_parser_resolves_values_and_defaults():
    fe = Frontend()
    requests = [
        ParameterRequest("params.xi", "xi"),
        ParameterRequest("numerics.n_points", "n_points", Importance.OPTIONAL, 1024),
        ParameterRequest("numerics.length", "length", Importance.OPTIONAL, 400.0),
        ParameterRequest("numerics.dt", "dt", Importance.OPTIONAL, None),
    ]
    parsed = RequestedParametersParser(fe, CONFIG).parse(requests)
    assert parsed["xi"] == 0.2
    assert parsed["params.xi"] == 0.2
    assert parsed["n_points"] == 512
    assert parsed["length"] == 400.0
    assert parsed.defaulted() == ["numerics.dt", "numerics.length"]
    warnings = [m for m in fe.messages if m.type == MsgType.WARNING]
    assert len(warnings) == 1
    assert "numerics.length" in warnings[0].text


def test_missing_required_keys_are_all_reported():
    fe = Frontend()
    requests = [ParameterRequest("params.g_over_Omega"), ParameterRequest("params.Omega_over_gamma")]
    with pytest.raises(ParameterNotFoundError) as info:
        RequestedParametersParser(fe, CONFIG).parse(requests)
    assert "params.g_over_Omega" in str(info.value)
    assert "params.Omega_over_gamma" in str(info.value)
    assert isinstance(info.value, ConfigurationError)
    assert sum(m.type == MsgType.ERROR for m in fe.messages) == 2


def test_dict_rejects_mismatched_keys():
    parsed = RequestedParameterDict()
    with pytest.raises(KeyError):
        parsed["other"] = RequestedParameter("params.xi", 0.2, alias="xi")
    parsed["xi"] = RequestedParameter("params.xi", 0.2, alias="xi")
    assert "xi" in parsed
    with pytest.raises(KeyError):
        parsed["xi"] = RequestedParameter("params.g", 1.0, alias="xi")
    assert parsed.as_record() == {"params.xi": 0.2}


def test_reject_unknown():
    assert sorted(flatten_keys(CONFIG)) == ["numerics.n_points", "params.Delta_over_gamma", "params.xi", "scenario"]
    allowed = {"scenario", "params.xi", "params.Delta_over_gamma", "numerics.n_points"}
    reject_unknown(CONFIG, allowed)
    reject_unknown({**CONFIG, "sweep": {"axes": {"params.xi": [0.1]}}}, allowed | {"sweep.*"})
    with pytest.raises(UnknownParameterError) as info:
        reject_unknown({**CONFIG, "params": {"xi": 0.2, "chi": 1.0}}, allowed)
    assert info.value.names == "params.chi"


def test_parse_override():
    assert parse_override("params.xi=0.3") == ("params.xi", 0.3)
    assert parse_override("numerics.boundary=dirichlet") == ("numerics.boundary", "dirichlet")
    assert parse_override("numerics.times=[1, 2]") == ("numerics.times", [1, 2])
    with pytest.raises(ConfigurationError):
        parse_override("params.xi")


def test_apply_override_creates_sections():
    config = {"scenario": "derive", "params": 3}
    apply_override(config, "params.xi", 0.3)
    apply_override(config, "numerics.dt", 0.01)
    assert config == {"scenario": "derive", "params": {"xi": 0.3}, "numerics": {"dt": 0.01}}
