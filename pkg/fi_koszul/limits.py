"""Context-scoped resource ceiling for resolution terms."""
import logging
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional

from .exceptions import ResourceCeilingExceeded

logger = logging.getLogger(__name__)

dimension_ceiling: ContextVar[Optional[int]] = ContextVar('dimension_ceiling', default=None)

# Warn once a term uses this share of the ceiling
WARNING_SHARE = 0.8


@contextmanager
def ceiling(value: Optional[int]) -> Iterator[Optional[int]]:
    """Bound every term dimension checked with :func:`check_dimension` inside the block.
    ``None`` lifts the bound."""
    token = dimension_ceiling.set(value)
    try:
        yield value
    finally:
        dimension_ceiling.reset(token)


def check_dimension(dimension: int, where: str = "") -> int:
    limit = dimension_ceiling.get()
    if limit is None:
        return dimension
    if dimension > limit:
        raise ResourceCeilingExceeded(dimension, limit, where)
    if dimension >= WARNING_SHARE * limit:
        logger.warning("Dimension %d is close to the ceiling %d (%s)", dimension, limit, where)
    return dimension
