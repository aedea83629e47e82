"""Connectors, coded points and the m-level construction with its checks.

Usage:
    from assembly import build_S_m, get_connector, verify_S_m

    connector = get_connector({"connector_starts": 8})
    points = build_S_m(seeds, m=2, K_sub=8, p=p, connector=connector)
    report = verify_S_m(points, seeds, p)
"""

from assembly.base import BaseConnector, ConnectorResult
from assembly.coded import (
    CodedPoint,
    Correction,
    append_symbol,
    build_S_m,
    centralizer_bound,
    second_shadow_eps,
)
from assembly.scan import PairOutcome, scan_nprime
from assembly.verify import (
    EtaCertificate,
    certify_eta,
    check_separated,
    first_difference,
    iii_budget,
    tracking_bound,
    tracking_report,
    verify_S_m,
)
from construction import ConstructionParams
from lattice import LatticeClass


def get_connector(config: dict) -> BaseConnector:
    """Create a connector search based on configuration.

    Args:
        config: Run settings. Uses 'connector_starts', 'connector_budget' and 'seed'.

    Returns:
        ShootingConnector, the only search mode.
    """
    from assembly.shooting import ShootingConnector
    return ShootingConnector(config)


def find_connector(
    x: LatticeClass,
    y: LatticeClass,
    p: ConstructionParams,
    connector: BaseConnector | None = None,
) -> ConnectorResult:
    """Connector from near y to near x of length p.Nprime with the default search."""
    return (connector or get_connector({})).find(x, y, p)


__all__ = [
    "BaseConnector",
    "CodedPoint",
    "ConnectorResult",
    "Correction",
    "EtaCertificate",
    "PairOutcome",
    "append_symbol",
    "build_S_m",
    "centralizer_bound",
    "certify_eta",
    "check_separated",
    "find_connector",
    "first_difference",
    "get_connector",
    "iii_budget",
    "scan_nprime",
    "second_shadow_eps",
    "tracking_bound",
    "tracking_report",
    "verify_S_m",
]
