from ._params import DcpParams, AtmosphericLight
from ._dcp import (
    dark_channel,
    atmospheric_light,
    estimate_transmission,
    guided_filter,
    recover_radiance,
    dcp_dehaze,
    luma,
)

__all__ = [
    "DcpParams",
    "AtmosphericLight",
    "dark_channel",
    "atmospheric_light",
    "estimate_transmission",
    "guided_filter",
    "recover_radiance",
    "dcp_dehaze",
    "luma",
]
