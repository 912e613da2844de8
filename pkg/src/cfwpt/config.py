"""Scenario parameters, validation, and the flat key=value scenario file format.

A scenario describes one simulated network end to end: coherence-block split,
transmit/noise powers, geometry counts, RIS setup, rectifier constants, and
Monte Carlo controls.  The uplink sample count is always derived from the
coherence-block identity  delta_c = delta_p + delta_d + delta_u  so the split
cannot be violated by construction.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

MODES = ("coherent", "non-coherent")
EH_MODELS = ("linear", "non-linear")
STRATEGIES = ("edge", "central", "hybrid")


class ScenarioError(ValueError):
    """A scenario value violates an invariant; the message names it."""


class ScenarioParseError(ScenarioError):
    """A scenario file could not be parsed; the message carries the line number."""


def noise_power_from_dbm(dbm: float) -> float:
    """Convert a dB-milliwatt figure to watts: 10**((dbm - 30) / 10)."""
    if not math.isfinite(dbm):
        raise ScenarioError("noise_dbm must be finite")
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Physical-layer constants shared by every block of the simulation.

    delta_* are sample counts inside one coherence block (pilot, downlink
    energy, uplink data).  Powers are linear watts.
    """

    delta_c: int
    delta_p: int
    delta_d: int
    delta_u: int
    rho_p: float          # pilot transmit power per device (W)
    rho_d: float          # downlink power limit per AP (W)
    sigma2: float         # receiver noise power (W)
    f_c: float            # carrier frequency (Hz)
    sigma_sf_los: float   # LOS shadow-fading std (dB)
    sigma_sf_nlos: float  # NLOS shadow-fading std (dB), reserved for a blocked-LOS variant

    def __post_init__(self):
        for name in ("delta_c", "delta_p", "delta_d", "delta_u"):
            if getattr(self, name) < 1:
                raise ScenarioError(f"{name} must be >= 1")
        if self.delta_p + self.delta_d + self.delta_u != self.delta_c:
            raise ScenarioError(
                "coherence block split violated: delta_p + delta_d + delta_u != delta_c"
            )
        # rho_p == 0 is a legal degenerate case (no pilot energy -> zero estimates)
        if self.rho_p < 0:
            raise ScenarioError("rho_p must be >= 0")
        if self.rho_d <= 0:
            raise ScenarioError("rho_d must be > 0")
        if self.sigma2 <= 0:
            raise ScenarioError("sigma2 must be > 0")
        if self.f_c <= 0:
            raise ScenarioError("f_c must be > 0")
        if self.sigma_sf_los < 0 or self.sigma_sf_nlos < 0:
            raise ScenarioError("shadow-fading std must be >= 0")

    @property
    def wavelength(self) -> float:
        return 299792458.0 / self.f_c


@dataclass(frozen=True)
class RectifierParams:
    """Constants of the rectifier transfer curve E = delta_d * a*I / (b*I + c).

    a > 0 is the conversion gain, b >= 0 drives saturation (b == 0 is the
    linear model), and c > 0 keeps E(0) == 0 well defined.
    """

    a: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ScenarioError("rectifier gain a must be > 0")
        if self.b < 0:
            raise ScenarioError("rectifier saturation b must be >= 0")
        if not self.c > 0:
            raise ScenarioError("rectifier offset c must be > 0")


# Defaults: physics constants from the reference parameter set, desk-scale
# geometry/Monte-Carlo counts chosen to finish in minutes.
@dataclass(frozen=True)
class ScenarioSpec:
    """One fully specified experiment, stored in file-format primitive units.

    Derived SI quantities are exposed through the ``system`` and ``rectifier``
    properties; keeping the primitives here makes serialization lossless.
    """

    delta_c: int = 200
    delta_p: int = 5
    delta_d: int = 25
    rho_p_w: float = 1e-7
    total_power_w: float = 10.0
    noise_dbm: float = -96.0
    carrier_ghz: float = 3.4
    shadow_los_db: float = 3.0
    shadow_nlos_db: float = 4.0
    ap_count: int = 16
    antennas: int = 4
    user_count: int = 8
    ris_count: int = 4
    ris_elements: int = 32
    ris_alpha: float = 1.0
    coverage_m: float = 100.0
    ap_height_m: float = 25.0
    ris_height_m: float = 10.0
    user_height_m: float = 1.0
    mode: str = "coherent"
    eh_model: str = "non-linear"
    strategy: str = "hybrid"
    setups: int = 50
    seed: int = 1
    mc_realizations: int = 500
    rect_a: float = 1.0
    rect_b: float = 1.0
    rect_c: float = 1.0

    def __post_init__(self):
        root = math.isqrt(self.ap_count)
        if self.ap_count < 1 or root * root != self.ap_count:
            raise ScenarioError("ap_count must be a perfect square (grid layout)")
        if self.antennas < 1:
            raise ScenarioError("antennas must be >= 1")
        if self.user_count < 1:
            raise ScenarioError("user_count must be >= 1")
        if self.ris_count < 0:
            raise ScenarioError("ris_count must be >= 0")
        if self.ris_elements < 0:
            raise ScenarioError("ris_elements must be >= 0")
        if not (0.0 < self.ris_alpha <= 1.0):
            raise ScenarioError("alpha out of (0,1]")
        if self.coverage_m <= 0:
            raise ScenarioError("coverage_m must be > 0")
        for name in ("ap_height_m", "ris_height_m", "user_height_m"):
            if getattr(self, name) < 0:
                raise ScenarioError(f"{name} must be >= 0")
        if self.mode not in MODES:
            raise ScenarioError(f"mode must be one of {MODES}")
        if self.eh_model not in EH_MODELS:
            raise ScenarioError(f"eh_model must be one of {EH_MODELS}")
        if self.strategy not in STRATEGIES:
            raise ScenarioError(f"strategy must be one of {STRATEGIES}")
        if self.setups < 1:
            raise ScenarioError("setups must be >= 1")
        if self.mc_realizations < 100:
            raise ScenarioError("mc_realizations must be >= 100")
        if self.total_power_w <= 0:
            raise ScenarioError("total_power_w must be > 0")
        if self.rho_p_w < 0:
            raise ScenarioError("rho_p_w must be >= 0")
        # Constructing the derived views runs their own validation too.
        self.system
        self.rectifier

    @property
    def delta_u(self) -> int:
        """Uplink sample count, always derived from the block split."""
        delta_u = self.delta_c - self.delta_p - self.delta_d
        if delta_u < 1:
            raise ScenarioError("delta_p + delta_d leave no uplink samples in delta_c")
        return delta_u

    @property
    def system(self) -> SystemParams:
        return SystemParams(
            delta_c=self.delta_c,
            delta_p=self.delta_p,
            delta_d=self.delta_d,
            delta_u=self.delta_u,
            rho_p=self.rho_p_w,
            rho_d=self.total_power_w / self.ap_count,
            sigma2=noise_power_from_dbm(self.noise_dbm),
            f_c=self.carrier_ghz * 1e9,
            sigma_sf_los=self.shadow_los_db,
            sigma_sf_nlos=self.shadow_nlos_db,
        )

    @property
    def rectifier(self) -> RectifierParams:
        return RectifierParams(a=self.rect_a, b=self.rect_b, c=self.rect_c)

    def to_dict(self) -> dict:
        return asdict(self)


_INT_KEYS = {
    "delta_c", "delta_p", "delta_d", "ap_count", "antennas", "user_count",
    "ris_count", "ris_elements", "setups", "seed", "mc_realizations",
}
_FLOAT_KEYS = {
    "rho_p_w", "total_power_w", "noise_dbm", "carrier_ghz", "shadow_los_db",
    "shadow_nlos_db", "ris_alpha", "coverage_m", "ap_height_m", "ris_height_m",
    "user_height_m", "rect_a", "rect_b", "rect_c",
}
_STR_KEYS = {"mode", "eh_model", "strategy"}
SCENARIO_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS


def parse_scenario(text: str) -> ScenarioSpec:
    """Parse the flat ``key = value`` scenario format (one key per line, # comments)."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioParseError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in SCENARIO_KEYS:
            raise ScenarioParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioParseError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise ScenarioParseError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    return ScenarioSpec(**values)


def load_scenario(path) -> ScenarioSpec:
    """Load and validate a scenario file; defaults fill every omitted key."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def dump_scenario(spec: ScenarioSpec) -> str:
    """Serialize a scenario; reloading the output reproduces ``spec`` exactly."""
    lines = []
    for f in fields(spec):
        value = getattr(spec, f.name)
        lines.append(f"{f.name} = {value!r}" if isinstance(value, str) else f"{f.name} = {value}")
    return "\n".join(lines).replace("'", "") + "\n"


def save_scenario(spec: ScenarioSpec, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_scenario(spec))
