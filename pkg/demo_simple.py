"""Simple codrisk demo.

This script implements the examples from docs/01_getting_started.md.
It computes a conditional measure, both contributions and an oracle estimate
for one risk pair.
"""

import logging
import sys
from pathlib import Path

# Ensure we can import the local package
sys.path.insert(0, str(Path("src").resolve()))

from codrisk import (
    BivariateModel,
    Gamma,
    Gumbel,
    build_distortion,
    cod,
    delta_cod,
    delta_cod_type2,
    mc_cod,
    threshold_quantile,
)
from codrisk.utils import format_float

logging.basicConfig(level=logging.INFO, format="%(message)s")
_LOGGER = logging.getLogger(__name__)


def main() -> None:
    """Run the simple demo."""
    # 1. Risk pair: gamma risks coupled by a Gumbel(2) copula
    model = BivariateModel(Gumbel(2.0), Gamma(0.5, 1.0), Gamma(1.5, 1.0))
    g = build_distortion("power", (0.3,))
    h = build_distortion("power", (0.5,))

    # 2. Threshold of the conditioning event
    u_g = threshold_quantile(g, model.marginal_x)
    _LOGGER.info("u_g = %s", format_float(u_g))

    # 3. Conditional measure and contributions
    _LOGGER.info("CoD        = %s", format_float(cod(model, g, h).value))
    _LOGGER.info("Delta CoD  = %s", format_float(delta_cod(model, g, h).value))
    median = build_distortion("var", (0.5,))
    type2 = delta_cod_type2(model, g, median, h)
    _LOGGER.info("Delta^med  = %s", format_float(type2.value))

    # 4. Independent check by rejection sampling
    estimate = mc_cod(model, g, h, n=200_000, seed=42, batches=20)
    _LOGGER.info(
        "Oracle     = %s +/- %s (%d accepted)",
        format_float(estimate.mean),
        format_float(estimate.stderr),
        estimate.n_accepted,
    )


if __name__ == "__main__":
    main()
