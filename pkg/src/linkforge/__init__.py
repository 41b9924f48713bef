"""linkforge: trace, certify and identify links of real polynomial germs."""

__version__ = "0.1.0"

from .polymap import (  # noqa: F401
    Poly,
    PolyMap,
    Substitution,
    brieskorn,
    catalog_names,
    get_germ,
    parse_polymap,
)
