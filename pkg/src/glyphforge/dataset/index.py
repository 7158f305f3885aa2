"""Annotation index codec.

Every sample carries a four-part identifier ``P_I_S_x``: page number in
the source monogram table, word position on that page, typeface-variant
serial within the character, and the handwritten-imitation serial. A
handwritten serial of 0 marks an original archaeological crop rather
than an imitation.
"""

import re
from dataclasses import dataclass

from ..errors import MalformedIndex

# decimal fields without leading zeros ("0" itself is legal for the serial)
_FIELD = re.compile(r"^(0|[1-9][0-9]*)$")


@dataclass(frozen=True, order=True)
class AnnotationIndex:
    page: int
    position: int
    typeface_sample: int
    handwritten_serial: int

    def __post_init__(self):
        for name in ("page", "position", "typeface_sample"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 1:
                raise MalformedIndex(f"{name} must be an integer >= 1, got {getattr(self, name)!r}")
        if not isinstance(self.handwritten_serial, int) or self.handwritten_serial < 0:
            raise MalformedIndex(
                f"handwritten_serial must be an integer >= 0, got {self.handwritten_serial!r}"
            )


def parse_index(s: str) -> AnnotationIndex:
    """Parse a canonical ``P_I_S_x`` string; raises MalformedIndex otherwise."""
    parts = s.split("_")
    if len(parts) != 4:
        raise MalformedIndex(f"expected 4 underscore-separated fields, got {len(parts)}: {s!r}")
    for part in parts:
        if not _FIELD.match(part):
            raise MalformedIndex(f"field {part!r} is not a decimal integer without leading zeros")
    page, position, typeface, serial = (int(p) for p in parts)
    return AnnotationIndex(page, position, typeface, serial)


def format_index(ix: AnnotationIndex) -> str:
    """Canonical underscore-joined form; inverse of parse_index."""
    return f"{ix.page}_{ix.position}_{ix.typeface_sample}_{ix.handwritten_serial}"
