"""Scheme configuration and the ``EC<m>-<FAMILY>-<n>`` naming grammar."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .ecflux import EC_ORDERS
from .errors import ConfigurationError
from .esflux import SelectorConfig
from .reconstruction import FAMILIES, NsFluxConfig

# legend family token -> {order: family id}
_FAMILY_TOKENS = {
    "LLF": {1: "llf1"},
    "RUSANOV": {1: "llf1"},
    "ENO": {2: "eno2", 3: "eno3"},
    "WENOJS": {3: "weno3js", 5: "weno5js"},
    "WENOZ": {3: "weno3z", 5: "weno5z"},
}
_RENDER = {fam: (tok, order) for tok, d in _FAMILY_TOKENS.items() if tok != "RUSANOV" for order, fam in d.items()}

SCHEME_GRAMMAR = (
    "EC<m>-<FAMILY>-<n> (gated), <FAMILY>-<n> (pure non-oscillatory) or EC<m> (pure entropy-conservative); "
    "m in {2,4,6}; FAMILY-n in {LLF-1, ENO-2, ENO-3, WENOJS-3, WENOJS-5, WENOZ-3, WENOZ-5}; "
    "'EC-6-WENOJS-5' and 'ES6-...' spellings are accepted"
)

_NAME_RE = re.compile(
    r"^(?:(?:EC|ES)-?(?P<ec>\d+))?(?:-?(?P<fam>[A-Z]+)-(?P<n>\d+))?$"
)


@dataclass(frozen=True)
class FluxSchemeConfig:
    ec_order: int | None = 6
    ns: NsFluxConfig | None = NsFluxConfig()
    selector: SelectorConfig = SelectorConfig()

    def __post_init__(self):
        if self.ec_order is None and self.ns is None:
            raise ConfigurationError("a scheme needs an EC flux, a non-oscillatory flux, or both")
        if self.ec_order is not None and self.ec_order not in EC_ORDERS:
            raise ConfigurationError(f"EC order must be one of {EC_ORDERS}")

    @property
    def gated(self) -> bool:
        return self.ec_order is not None and self.ns is not None

    @property
    def ghost_width(self) -> int:
        g = 1
        if self.ec_order is not None:
            g = max(g, self.ec_order // 2)
        if self.ns is not None:
            g = max(g, self.ns.ghost_width)
        return g

    @property
    def name(self) -> str:
        return render_scheme_name(self)

    def with_options(self, *, epsilon=None, splitting=None, selector=None) -> FluxSchemeConfig:
        ns = self.ns
        if ns is not None:
            if epsilon is not None:
                ns = replace(ns, epsilon=epsilon)
            if splitting is not None:
                ns = replace(ns, splitting=splitting)
        return replace(self, ns=ns, selector=selector if selector is not None else self.selector)


def parse_scheme_name(name: str, **ns_options) -> FluxSchemeConfig:
    """Map a legend like ``EC6-WENOJS-5``, ``ENO-3`` or ``EC4`` to a scheme config."""
    text = name.strip().upper().replace("_", "-")
    mt = _NAME_RE.match(text)
    if not text or mt is None or (mt["ec"] is None and mt["fam"] is None):
        raise ConfigurationError(f"malformed scheme name {name!r}; expected {SCHEME_GRAMMAR}")
    ec = int(mt["ec"]) if mt["ec"] is not None else None
    if ec is not None and ec not in EC_ORDERS:
        raise ConfigurationError(f"unsupported EC order in {name!r}; expected {SCHEME_GRAMMAR}")
    ns = None
    if mt["fam"] is not None:
        orders = _FAMILY_TOKENS.get(mt["fam"])
        n = int(mt["n"])
        if orders is None or n not in orders:
            raise ConfigurationError(f"unknown flux family {mt['fam']}-{n} in {name!r}; expected {SCHEME_GRAMMAR}")
        ns = NsFluxConfig(family=orders[n], **ns_options)
    return FluxSchemeConfig(ec_order=ec, ns=ns)


def render_scheme_name(cfg: FluxSchemeConfig) -> str:
    parts = []
    if cfg.ec_order is not None:
        parts.append(f"EC{cfg.ec_order}")
    if cfg.ns is not None:
        tok, order = _RENDER[cfg.ns.family]
        parts.append(f"{tok}-{order}")
    return "-".join(parts)


def all_scheme_names() -> list[str]:
    fams = [render_scheme_name(FluxSchemeConfig(None, NsFluxConfig(f))) for f in FAMILIES]
    ecs = [f"EC{m}" for m in EC_ORDERS]
    return ecs + fams + [f"{e}-{f}" for e in ecs for f in fams]
