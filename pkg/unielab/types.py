"""
Small record types shared between modules, primarily for type hinting.
"""

from pathlib import Path
from typing import Any, AnyStr, NamedTuple, Optional, Tuple, Union


# ==============================================================================
# Data-containing classes
# ==============================================================================

class Binding(NamedTuple):
    """ One context entry: a display name and a type. """
    name: str
    type: Any


class Definition(NamedTuple):
    """ A top-level constant. Postulates have no `body`. """
    type: Any
    body: Optional[Any] = None

    @property
    def isPostulate(self) -> bool:
        return self.body is None


class MetaInfo(NamedTuple):
    """ A signature entry: the closed type of a meta-variable, and an
        optional display name for declared ones.
    """
    type: Any
    name: Optional[str] = None


# ==============================================================================
# Type hinting definitions
# ==============================================================================

Filename = Union[AnyStr, Path]
Position = Tuple[int, int]
