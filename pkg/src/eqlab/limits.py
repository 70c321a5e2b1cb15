"""Search/size caps.  `WB_LIMITS` (a JSON object) overrides the defaults."""

import json
import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    max_maps: int = 1_000_000        # cap on |cod|^|dom| before enumerating maps
    max_elements: int = 1_000        # cap on elements of a constructed object
    max_terms: int = 60_000          # cap on a term universe
    max_pairs: int = 2_000_000       # cap on saturation pairs |T|^2
    max_subs: int = 2_000_000        # cap on axiom substitution tuples
    max_rounds: int = 10_000         # fixpoint round budget

    def override(self, **kwargs):
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def from_env():
    raw = os.environ.get("WB_LIMITS")
    if not raw:
        return Limits()
    data = json.loads(raw)
    unknown = set(data) - set(Limits.__dataclass_fields__)
    if unknown:
        raise ValueError(f"unknown WB_LIMITS keys: {sorted(unknown)}")
    return Limits(**data)


DEFAULT = from_env()
