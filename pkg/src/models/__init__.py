from .layout import BlockId, Cell, Layout
