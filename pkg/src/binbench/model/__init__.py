"""Exact sizes, instances, and the online packing state."""

from binbench.model.instance import (
    Instance,
    InstanceFormatError,
    Size,
    format_instance,
    parse_instance,
    read_instance,
    volume_bound,
    write_instance,
)
from binbench.model.state import (
    NEW_BIN,
    BadIndex,
    Bin,
    CapacityExceeded,
    PackingError,
    PackingState,
    Placement,
    Violation,
    bins_used,
    place_item,
    validate_state,
)

__all__ = [
    "Instance", "InstanceFormatError", "Size", "format_instance", "parse_instance",
    "read_instance", "volume_bound", "write_instance",
    "NEW_BIN", "BadIndex", "Bin", "CapacityExceeded", "PackingError", "PackingState",
    "Placement", "Violation", "bins_used", "place_item", "validate_state",
]
