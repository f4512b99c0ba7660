import enum
import json
from collections import UserDict, namedtuple
from collections.abc import Iterable, Mapping

from .errors import ConfigurationError
from .Frontend import MsgType


class Importance(enum.IntEnum):  # whether a scenario can run without the key
    OPTIONAL = 1
    REQUIRED = 2


_ParameterRequest = namedtuple(
    "ParameterRequest",
    ["name", "alias", "importance", "default_value", "warn_when_missing"],
    defaults=(None, Importance.REQUIRED, 0.0, True),
)


class ParameterRequest(_ParameterRequest):
    """A configuration key requested by a scenario.

    Args:
        name (str): Dotted path of the key, e.g. "numerics.dt".
        alias (str, optional): A short name for lookups. Defaults to None.
        importance (:obj:`Importance`, optional): Whether the key is required or
            optional. Defaults to Importance.REQUIRED.
        default_value (optional): Value used when an OPTIONAL key is absent.
            Defaults to float(0).
        warn_when_missing (bool, optional): Whether to issue a warning when an OPTIONAL
            key is missing. Defaults to True.
    """

    pass


class ParameterNotFoundError(ConfigurationError):
    """Exception raised when requested configuration keys cannot be found.

    Args:
        name (str): The name (or comma-separated names) of the missing keys.
        importance (:obj:`Importance`): Whether the keys were marked
            required or optional.
        message (str): A message explaining the error
    """

    def __init__(self, name, importance, message=None):
        importance_str = "Required" if importance == Importance.REQUIRED else "Optional"
        default_message = "{} parameter {} could not be found.".format(importance_str, name)

        self.name = name
        self.importance = int(importance)
        self.message = message or default_message
        super().__init__(self.message)


class UnknownParameterError(ConfigurationError):
    """Exception raised for configuration keys no scenario understands."""

    def __init__(self, names, message=None):
        self.names = ", ".join(sorted(names))
        self.message = message or "Unknown configuration keys: {}.".format(self.names)
        super().__init__(self.message)


class RequestedParameter:
    """Wrapper holding a resolved configuration value and its request metadata."""

    def __init__(self, name, value, importance=Importance.REQUIRED, alias=None, is_default=False):
        self._name = name
        self._value = value
        self._importance = importance
        self._alias = alias
        self._is_default = is_default

    @property
    def name(self):
        return self._name

    @property
    def value(self):
        return self._value

    @property
    def importance(self):
        return self._importance

    @property
    def alias(self):
        return self._alias

    @property
    def is_default(self):
        return self._is_default


_MISSING = object()
_ABSENT = object()  # what lookup hands back to parse for an absent key


def lookup(source: Mapping, dotted_name: str, default=_MISSING):
    """Resolve "a.b.c" inside nested mappings."""
    node = source
    for part in dotted_name.split("."):
        if not isinstance(node, Mapping) or part not in node:
            if default is _MISSING:
                raise KeyError(dotted_name)
            return default
        node = node[part]
    return node


class RequestedParameterDict(UserDict):
    """Dict of resolved parameters, addressable by dotted name or alias.

    Lookup returns the plain value. Values must be inserted under a key that
    matches the parameter's name or alias.
    """

    def __init__(self):
        self.aliasToName = {}
        super().__init__()

    def __getitem__(self, key):
        try:
            return super().__getitem__(key).value
        except KeyError:
            pass
        try:
            return super().__getitem__(self.aliasToName[key]).value
        except KeyError:
            pass
        raise KeyError(key)

    def __setitem__(self, key, item):
        name = item.name
        alias = item.alias

        if (key != name) and (key != alias):
            raise KeyError("Key must match either the parameter's name or alias.")

        if alias is not None:
            if (alias in self.aliasToName) and (self.aliasToName[alias] != name):
                raise KeyError("Alias {} is already used by parameter {}".format(alias, key))
            self.aliasToName[alias] = name

        return super().__setitem__(name, item)

    def __contains__(self, key):
        return super().__contains__(key) or key in self.aliasToName

    def defaulted(self):
        """Names of parameters that fell back to their default value."""
        return sorted(name for name, item in self.data.items() if item.is_default)

    def as_record(self):
        return {name: item.value for name, item in sorted(self.data.items())}


class RequestedParametersParser:
    """Resolves `ParameterRequest`s against a configuration mapping.

    Args:
        frontend (:obj:`Frontend`): Receives warnings and errors.
        source (Mapping): The (nested) configuration.
    """

    _MISSING_REQUIRED_PARAMETERS_MESSAGE = "Some required parameters are missing; aborted scenario."

    def __init__(self, frontend, source: Mapping):
        self.frontend = frontend
        self.source = source

    def parse(self, requested_parameters: Iterable[ParameterRequest]) -> RequestedParameterDict:
        """Parse a list of `ParameterRequest`s into a RequestedParameterDict.

        Raises:
            ParameterNotFoundError: If any REQUIRED key is absent.
        """
        parsed = RequestedParameterDict()
        found_missing_optional = False
        missing_required = []

        for request in requested_parameters:
            value = lookup(self.source, request.name, _ABSENT)
            if value is not _ABSENT:
                parsed[request.name] = RequestedParameter(request.name, value, request.importance, request.alias)
                continue

            if request.importance == Importance.OPTIONAL:
                parsed[request.name] = RequestedParameter(
                    request.name, request.default_value, request.importance, request.alias, is_default=True
                )
                # warn once, for the first missing optional key
                if request.warn_when_missing and not found_missing_optional:
                    self.frontend.message(
                        MsgType.WARNING,
                        "The optional parameter {} is not set; using the default {!r}.".format(
                            request.name, request.default_value
                        ),
                    )
                    found_missing_optional = True
            else:
                missing_required.append(request.name)
                self.frontend.message(MsgType.ERROR, ParameterNotFoundError(request.name, request.importance).message)

        if missing_required:
            raise ParameterNotFoundError(
                ", ".join(missing_required),
                Importance.REQUIRED,
                "{}: {}".format(self._MISSING_REQUIRED_PARAMETERS_MESSAGE, ", ".join(missing_required)),
            )

        return parsed


def flatten_keys(source: Mapping, prefix=""):
    """All leaf keys of a nested mapping in dotted form."""
    keys = []
    for key, value in source.items():
        name = prefix + str(key)
        if isinstance(value, Mapping) and value:
            keys.extend(flatten_keys(value, name + "."))
        else:
            keys.append(name)
    return keys


def reject_unknown(source: Mapping, allowed: Iterable[str]) -> None:
    """Raise UnknownParameterError for every leaf key outside `allowed`.

    An allowed entry ending in ".*" admits a whole sub-mapping.
    """
    allowed = set(allowed)
    prefixes = tuple(name[:-1] for name in allowed if name.endswith(".*"))
    unknown = [key for key in flatten_keys(source) if key not in allowed and not key.startswith(prefixes or ("\0",))]
    if unknown:
        raise UnknownParameterError(unknown)


def parse_override(text: str):
    """Split a `key=value` override; the value is read as JSON when possible."""
    key, separator, raw = text.partition("=")
    key = key.strip()
    if not separator or not key:
        raise ConfigurationError("Override {!r} is not of the form key=value.".format(text))
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_override(config: dict, key: str, value) -> None:
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    node[parts[-1]] = value
