class ParameterError(ValueError):
    """Invalid construction parameter (dimension, count, probability)."""


class DeviceFileError(ValueError):
    """Malformed device file; message carries the line or field at fault."""


class CapacityError(ValueError):
    """Hardware has fewer physical qubits than the circuit needs."""


class RoutingError(RuntimeError):
    """Gate operands sit in different connected components of the hardware."""


class DomainError(ValueError):
    """Noise parameter or depth outside the boundary's valid domain."""


class ResourceError(ValueError):
    """Requested simulation exceeds the qubit guard."""


class UnsupportedLocalityError(ValueError):
    """Term locality not expressible in the chosen gate set."""


class PartitionError(ValueError):
    """A surviving term straddles two components of a vertex partition."""
