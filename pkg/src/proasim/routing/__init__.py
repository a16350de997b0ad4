from .base import (
    ControlPacket,
    DataPacket,
    ForwardDecision,
    Protocol,
    RouteEntry,
    forward_data,
    lookup_next_hop,
    shortest_paths,
)
from .dsdv import DsdvConfig, DsdvProtocol
from .fsr import FsrConfig, FsrProtocol
from .olsr import OlsrConfig, OlsrProtocol, select_mprs

__all__ = [
    "ControlPacket",
    "DataPacket",
    "DsdvConfig",
    "DsdvProtocol",
    "ForwardDecision",
    "FsrConfig",
    "FsrProtocol",
    "OlsrConfig",
    "OlsrProtocol",
    "Protocol",
    "RouteEntry",
    "forward_data",
    "lookup_next_hop",
    "select_mprs",
    "shortest_paths",
]
