"""Flat key-value scenario files: parsing, validation, model assembly.

Format: one ``key = value`` per line, ``#`` starts a comment, decimal point
only (no locale parsing). Keys are validated against the selected model's
registry; unknown or duplicate keys are rejected with their line number.
Waveform blocks use dotted prefixes (``target_r.kind``, ``beta1.amp``, ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

from .engagement import EngagementParams, EngagementState
from .games import CubicDrift, GameScenario, GameState
from .uncertainty import NoiseChannel, Waveform

MODELS = (
    "example1",
    "example2",
    "example3",
    "engagement_perfect",
    "engagement_imperfect",
)

_FLOAT, _INT, _STR = "float", "int", "str"


class ScenarioError(ValueError):
    """Malformed scenario input; carries a line number when one applies."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


def _wave_keys(prefix: str) -> Dict[str, str]:
    return {
        f"{prefix}.kind": _STR,
        f"{prefix}.amp": _FLOAT,
        f"{prefix}.omega": _FLOAT,
        f"{prefix}.p": _INT,
        f"{prefix}.phase": _FLOAT,
    }


_COMMON = {
    "model": _STR,
    "t1": _FLOAT,
    "dt": _FLOAT,
    "seed": _INT,
    "noise.epsilon": _FLOAT,
}

_ENGAGEMENT_KEYS = {
    **_COMMON,
    "tau": _FLOAT,
    "kappa1": _FLOAT,
    "kappa2": _FLOAT,
    "rho_Mr": _FLOAT,
    "rho_Mn": _FLOAT,
    "rho_Tr": _FLOAT,
    "rho_Tn": _FLOAT,
    "eps_reg": _FLOAT,
    "R_stop": _FLOAT,
    "R_0": _FLOAT,
    "Vr_0": _FLOAT,
    "z_0": _FLOAT,
    "w_0": _FLOAT,
    "target_mode": _STR,
    **_wave_keys("target_r"),
    **_wave_keys("target_n"),
    **_wave_keys("beta1"),
    **_wave_keys("beta2"),
    **_wave_keys("beta3"),
    **_wave_keys("beta4"),
}

KEY_REGISTRY: Dict[str, Dict[str, str]] = {
    "example1": {
        **_COMMON,
        "x0": _FLOAT,
        "a": _FLOAT,
        "b": _FLOAT,
        "c": _FLOAT,
        "sigma": _FLOAT,
        "chi": _FLOAT,
        "m": _FLOAT,
        "n": _FLOAT,
        "Omega": _FLOAT,
        "k": _FLOAT,
        "root_tol": _FLOAT,
    },
    "example2": {
        **_COMMON,
        "x1_0": _FLOAT,
        "x2_0": _FLOAT,
        "kappa": _FLOAT,
        "rho1": _FLOAT,
        "rho2": _FLOAT,
        "tau": _FLOAT,
        "opponent_mode": _STR,
        **_wave_keys("opponent"),
    },
    "example3": {
        **_COMMON,
        "x1_0": _FLOAT,
        "x2_0": _FLOAT,
        "kappa1": _FLOAT,
        "kappa2": _FLOAT,
        "rho1": _FLOAT,
        "rho2": _FLOAT,
        "tau": _FLOAT,
        **_wave_keys("beta"),
    },
    "engagement_perfect": dict(_ENGAGEMENT_KEYS),
    "engagement_imperfect": dict(_ENGAGEMENT_KEYS),
}

REQUIRED_KEYS: Dict[str, Tuple[str, ...]] = {
    "example1": ("t1", "dt", "x0"),
    "example2": ("t1", "dt", "x1_0", "x2_0"),
    "example3": ("t1", "dt", "x1_0", "x2_0", "tau"),
    "engagement_perfect": ("t1", "dt", "tau", "R_0", "Vr_0", "z_0", "w_0"),
    "engagement_imperfect": ("t1", "dt", "tau", "R_0", "Vr_0", "z_0", "w_0"),
}


@dataclass
class Scenario:
    """A validated scenario: the raw entries plus the assembled model params."""

    model: str
    entries: Dict[str, str]
    game: Optional[GameScenario] = None
    eng: Optional[EngagementParams] = None
    root_tol: float = 1e-9
    source: str = "<memory>"

    @property
    def is_engagement(self) -> bool:
        return self.model.startswith("engagement")

    @property
    def engagement_mode(self) -> str:
        return "imperfect" if self.model == "engagement_imperfect" else "perfect"


def parse_entries(text: str, source: str = "<memory>") -> Dict[str, Tuple[str, int]]:
    """Parse key = value lines into {key: (value, line_no)}."""
    entries: Dict[str, Tuple[str, int]] = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {raw_line.strip()!r}",
                                line_no)
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ScenarioError(f"empty key or value in {raw_line.strip()!r}", line_no)
        if key in entries:
            raise ScenarioError(f"duplicate key '{key}'", line_no)
        entries[key] = (value, line_no)
    return entries


def _typed(key: str, value: str, kind: str, line_no: int):
    if kind == _STR:
        return value
    try:
        if kind == _INT:
            return int(value)
        return float(value)
    except ValueError:
        raise ScenarioError(f"key '{key}': cannot parse {value!r} as {kind}", line_no)


def _build_waveform(values: Dict[str, object], prefix: str) -> Waveform:
    kw = {}
    for sub in ("kind", "amp", "omega", "p", "phase"):
        dotted = f"{prefix}.{sub}"
        if dotted in values:
            kw[sub] = values[dotted]
    try:
        return Waveform(**kw)
    except ValueError as exc:
        raise ScenarioError(f"waveform '{prefix}': {exc}") from exc


def _noise(values: Dict[str, object]) -> NoiseChannel:
    return NoiseChannel(
        epsilon=float(values.get("noise.epsilon", 0.0)),
        seed=int(values.get("seed", 0)),
    )


def build_scenario(entries: Dict[str, Tuple[str, int]], source: str = "<memory>"
                   ) -> Scenario:
    """Validate entries against the model registry and assemble parameters."""
    if "model" not in entries:
        raise ScenarioError("missing required key 'model'")
    model = entries["model"][0]
    if model not in MODELS:
        raise ScenarioError(
            f"unknown model {model!r} (expected one of {', '.join(MODELS)})",
            entries["model"][1],
        )
    registry = KEY_REGISTRY[model]
    values: Dict[str, object] = {}
    for key, (value, line_no) in entries.items():
        if key not in registry:
            raise ScenarioError(f"unknown key '{key}' for model {model}", line_no)
        values[key] = _typed(key, value, registry[key], line_no)
    for key in REQUIRED_KEYS[model]:
        if key not in values:
            raise ScenarioError(f"model {model} requires key '{key}'")

    raw = {key: value for key, (value, _) in entries.items()}
    try:
        if model == "example1":
            return _build_example1(model, values, raw, source)
        if model in ("example2", "example3"):
            return _build_game(model, values, raw, source)
        return _build_engagement(model, values, raw, source)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def _build_example1(model, values, raw, source) -> Scenario:
    cubic = CubicDrift(
        a=float(values.get("a", 0.0)),
        b=float(values.get("b", 0.0)),
        c=float(values.get("c", 0.0)),
        sigma=float(values.get("sigma", 0.0)),
        chi=float(values.get("chi", 0.0)),
        m=float(values.get("m", 1.0)),
        n=float(values.get("n", 1.0)),
        omega=float(values.get("Omega", 1.0)),
        k=float(values.get("k", 1.0)),
    )
    game = GameScenario(
        t1=float(values["t1"]),
        dt=float(values["dt"]),
        x0=GameState(float(values["x0"]), 0.0),
        cubic=cubic,
        noise=_noise(values),
    )
    return Scenario(model=model, entries=raw, game=game,
                    root_tol=float(values.get("root_tol", 1e-9)), source=source)


def _build_game(model, values, raw, source) -> Scenario:
    game = GameScenario(
        t1=float(values["t1"]),
        dt=float(values["dt"]),
        x0=GameState(float(values["x1_0"]), float(values["x2_0"])),
        kappa=float(values.get("kappa", 0.0)),
        kappa1=float(values.get("kappa1", 0.0)),
        kappa2=float(values.get("kappa2", 0.0)),
        rho1=float(values.get("rho1", 0.0)),
        rho2=float(values.get("rho2", 0.0)),
        opponent=_build_waveform(values, "opponent"),
        opponent_mode=str(values.get("opponent_mode", "waveform")),
        beta=_build_waveform(values, "beta"),
        tau=float(values.get("tau", 0.0)),
        horizon_mode="native",
        noise=_noise(values),
    )
    if model == "example3" and not (game.tau > 0.0):
        raise ScenarioError("model example3 requires tau > 0")
    return Scenario(model=model, entries=raw, game=game, source=source)


def _build_engagement(model, values, raw, source) -> Scenario:
    eng = EngagementParams(
        x0=EngagementState(
            R=float(values["R_0"]),
            Vr=float(values["Vr_0"]),
            z=float(values["z_0"]),
            w=float(values["w_0"]),
        ),
        t1=float(values["t1"]),
        dt=float(values["dt"]),
        tau=float(values["tau"]),
        kappa1=float(values.get("kappa1", 0.0)),
        kappa2=float(values.get("kappa2", 0.0)),
        rho_Mr=float(values.get("rho_Mr", 20.0)),
        rho_Mn=float(values.get("rho_Mn", 20.0)),
        rho_Tr=float(values.get("rho_Tr", 0.0)),
        rho_Tn=float(values.get("rho_Tn", 0.0)),
        eps_reg=float(values.get("eps_reg", 1e-6)),
        R_stop=float(values.get("R_stop", 1e-3)),
        target_r=_build_waveform(values, "target_r"),
        target_n=_build_waveform(values, "target_n"),
        beta1=_build_waveform(values, "beta1"),
        beta2=_build_waveform(values, "beta2"),
        beta3=_build_waveform(values, "beta3"),
        beta4=_build_waveform(values, "beta4"),
        target_mode=str(values.get("target_mode", "waveform")),
        noise=_noise(values),
    )
    if not (eng.tau > 0.0):
        raise ScenarioError("engagement models require tau > 0")
    return Scenario(model=model, entries=raw, eng=eng, source=source)


def load_scenario(path) -> Scenario:
    """Read, parse, and validate a scenario file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {p}: {exc}") from exc
    return build_scenario(parse_entries(text, str(p)), source=str(p))


def override_entry(scn: Scenario, key: str, value: float) -> Scenario:
    """Rebuild a scenario with one numeric key replaced (sweep support)."""
    registry = KEY_REGISTRY[scn.model]
    if key not in registry:
        raise ScenarioError(f"unknown key '{key}' for model {scn.model}")
    if registry[key] == _STR:
        raise ScenarioError(f"key '{key}' is not numeric and cannot be swept")
    text_value = repr(int(value)) if registry[key] == _INT else repr(float(value))
    entries = {k: (v, i + 1) for i, (k, v) in enumerate(scn.entries.items())}
    entries[key] = (text_value, entries[key][1] if key in entries else 0)
    return build_scenario(entries, source=scn.source)


def with_horizon_mode(scn: Scenario, mode: str) -> Scenario:
    """Clone a scenario with the guidance horizon mode replaced (compare support)."""
    import dataclasses

    if scn.is_engagement:
        assert scn.eng is not None
        return dataclasses.replace(scn, eng=dataclasses.replace(scn.eng, horizon_mode=mode))
    assert scn.game is not None
    if scn.model == "example1":
        raise ScenarioError("model example1 has no feedback law to compare")
    game_mode = mode
    if mode == "theta" and not (scn.game.tau > 0.0):
        raise ScenarioError("theta-horizon comparison requires tau > 0 in the scenario")
    return dataclasses.replace(scn, game=dataclasses.replace(scn.game, horizon_mode=game_mode))
