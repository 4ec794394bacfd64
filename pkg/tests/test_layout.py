# tests/test_layout.py
import os
import unittest
import warnings

from src.exceptions import (ConfigError, DegenerateCellError, IndexOutOfRangeError, LayoutSyntaxError,
                            UnsupportedSizeError, UnstoredBlockWarning)
from src.layouts.generators import generate_named, generate_pp, generate_rp, list_schemes
from src.layouts.layout_file import cell_labels, parse_layout, serialize_layout
from src.models.layout import Cell, Layout
from src.utils.log import init_logging
from tests.data.reference_layouts import (GRIDS, PP1_DISK0_LINE, RR_DISK0_LABELS, RR_DISK0_LINE, RR_DOCUMENT)


class TestCell(unittest.TestCase):

    def test_singleton_and_parity(self):
        self.assertFalse(Cell.of(3).is_parity)
        self.assertTrue(Cell.of(1, 2).is_parity)
        self.assertEqual(Cell.of(2, 1).token, "X(1,2)")
        self.assertEqual(Cell.of(3).token, "B3")
        self.assertEqual(Cell.of(0, 2).mask, 0b101)

    def test_repeated_block_is_rejected(self):
        with self.assertRaises(DegenerateCellError):
            Cell.of(2, 2)

    def test_empty_cell_is_rejected(self):
        with self.assertRaises(DegenerateCellError):
            Cell(frozenset())


class TestGenerators(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        init_logging()

    def test_named_schemes_reproduce_reference_grids(self):
        """All 15 cells of each five-disk storage model."""
        for scheme, grid in GRIDS.items():
            with self.subTest(scheme=scheme):
                expected = Layout.from_rows(scheme, 5, grid)
                self.assertEqual(generate_named(scheme, 5), expected)

    def test_spot_cells(self):
        rr = generate_named("RR", 5)
        self.assertEqual([c.sorted_members for c in rr.grid[0]], [(0,), (4,), (3,)])
        pp2 = generate_named("PP2", 5)
        self.assertEqual([c.sorted_members for c in pp2.grid[1]], [(1,), (1, 3), (0, 4)])
        rp2 = generate_named("RP2", 5)
        self.assertEqual([c.sorted_members for c in rp2.grid[4]], [(4,), (3,), (0, 1)])
        pp1 = generate_named("PP1", 5)
        self.assertEqual([c.sorted_members for c in pp1.grid[2]], [(2,), (3, 4), (0, 1)])

    def test_scheme_names_are_case_insensitive(self):
        self.assertEqual(generate_named("pp1", 5), generate_named("PP1", 5))

    def test_shape_and_redundancy(self):
        for n in (5, 6, 9):
            for scheme in list_schemes():
                with self.subTest(scheme=scheme, n=n):
                    layout = generate_named(scheme, n)
                    self.assertTrue(all(len(cells) == 3 for cells in layout.grid))
                    self.assertEqual(layout.redundancy_cells, 2 * n)
                    self.assertEqual(layout.replication_factor, 2.0)
                    self.assertEqual(layout.unstored_blocks(), set())
                    for d in range(n):
                        self.assertEqual(layout.grid[d][0], Cell.of(d))

    def test_rotation_symmetry(self):
        for scheme in list_schemes():
            layout = generate_named(scheme, 7)
            for d in range(7):
                shifted = tuple(Cell(frozenset((b + d) % 7 for b in cell.members)) for cell in layout.grid[0])
                self.assertEqual(layout.grid[d], shifted)

    def test_too_few_disks(self):
        with self.assertRaises(UnsupportedSizeError):
            generate_named("RR", 4)
        with self.assertRaises(UnsupportedSizeError):
            generate_pp(4, 1, 2, 3, 4)

    def test_unknown_scheme(self):
        with self.assertRaises(ConfigError):
            generate_named("RAID5", 5)

    def test_offset_families_contain_named_schemes(self):
        self.assertEqual(generate_pp(5, 1, 2, 3, 4), generate_named("PP1", 5))
        self.assertEqual(generate_pp(5, 0, 2, 3, 4), generate_named("PP2", 5))
        self.assertEqual(generate_rp(5, 1, 0, 2), generate_named("RP1", 5))
        self.assertEqual(generate_rp(5, 1, 1, 2), generate_named("RP2", 5))
        self.assertEqual(generate_pp(8, 1, 2, 3, 4), generate_named("PP1", 8))

    def test_degenerate_offsets(self):
        with self.assertRaises(DegenerateCellError):
            generate_pp(5, 1, 1, 3, 4)
        with self.assertRaises(DegenerateCellError):
            generate_pp(5, 1, 6, 3, 4)
        with self.assertRaises(DegenerateCellError):
            generate_rp(5, 0, 1, 2)
        with self.assertRaises(DegenerateCellError):
            generate_rp(5, 5, 1, 2)

    def test_relabel(self):
        rr = generate_named("RR", 5)
        identity = list(range(5))
        self.assertEqual(rr.relabel(identity, identity), rr)

        moved = rr.relabel([1, 2, 3, 4, 0], identity)
        self.assertEqual(moved.grid[1], rr.grid[0])

        renamed_blocks = rr.relabel(identity, [4, 3, 2, 1, 0])
        self.assertEqual(renamed_blocks.grid[0][0], Cell.of(4))

        with self.assertRaises(IndexOutOfRangeError):
            rr.relabel([0, 0, 1, 2, 3], identity)


class TestLayoutFile(unittest.TestCase):
    TEST_DATA_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "layouts")

    @classmethod
    def setUpClass(cls):
        init_logging()

    def test_parse_reference_document(self):
        layout = parse_layout(RR_DOCUMENT)
        self.assertEqual(layout, generate_named("RR", 5))
        self.assertEqual(layout.name, "RR")

    def test_parse_file_from_disk(self):
        with open(os.path.join(self.TEST_DATA_PATH, "rr5.layout"), encoding="utf-8") as f:
            self.assertEqual(parse_layout(f.read()), generate_named("RR", 5))

    def test_serialize_canonical_lines(self):
        rr_lines = serialize_layout(generate_named("RR", 5)).splitlines()
        self.assertIn(RR_DISK0_LINE, rr_lines)
        self.assertIn(RR_DISK0_LABELS, rr_lines)
        self.assertIn(PP1_DISK0_LINE, serialize_layout(generate_named("PP1", 5)).splitlines())

    def test_serialize_is_byte_deterministic(self):
        first = serialize_layout(generate_named("PP2", 6))
        second = serialize_layout(generate_pp(6, 0, 2, 3, 4).renamed("PP2"))
        self.assertEqual(first, second)
        self.assertTrue(first.endswith("\n"))

    def test_parse_of_serialize_is_identity(self):
        for scheme in list_schemes():
            layout = generate_named(scheme, 6)
            self.assertEqual(parse_layout(serialize_layout(layout)), layout)

    def test_serialize_normalizes_member_order(self):
        text = "disks = 2\nblocks = 2\ndisk 1:  B1 , X( 1 , 0 )\ndisk 0: B0\n"
        self.assertEqual(serialize_layout(parse_layout(text)),
                         "name = layout\ndisks = 2\nblocks = 2\n"
                         "# D0: B_0\ndisk 0: B0\n"
                         "# D1: B_1, B_0^B_1\ndisk 1: B1, X(0,1)\n")

    def test_repeated_block_in_cell(self):
        with self.assertRaises(DegenerateCellError):
            parse_layout("disk 0: X(2,2)")

    def test_block_beyond_declared_count(self):
        with self.assertRaises(IndexOutOfRangeError):
            parse_layout("disks = 1\nblocks = 2\ndisk 0: B0, B2\n")

    def test_disk_beyond_declared_count(self):
        with self.assertRaises(IndexOutOfRangeError):
            parse_layout("disks = 1\nblocks = 1\ndisk 3: B0\n")

    def test_syntax_errors_carry_position(self):
        with self.assertRaises(LayoutSyntaxError) as ctx:
            parse_layout("disks = 1\nblocks = 1\ndisk 0: B0; B1\n")
        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(ctx.exception.column, 11)
        self.assertIn("line 3, column 11", str(ctx.exception))

        with self.assertRaises(LayoutSyntaxError):
            parse_layout("disks = 2\nblocks = 1\ndisk 0: B0\n")
        with self.assertRaises(LayoutSyntaxError):
            parse_layout("disks = 1\nblocks = 1\ndisk 0: B0\ndisk 0: B0\n")
        with self.assertRaises(LayoutSyntaxError):
            parse_layout("disks = 1\nblocks = 2\ndisk 0: X(1)\n")
        with self.assertRaises(LayoutSyntaxError):
            parse_layout("stripe = 1\n")

    def test_unstored_block_warns_but_parses(self):
        with open(os.path.join(self.TEST_DATA_PATH, "parity_only.layout"), encoding="utf-8") as f:
            text = f.read()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            layout = parse_layout(text)
        self.assertEqual(layout.unstored_blocks(), {2})
        self.assertTrue(any(issubclass(w.category, UnstoredBlockWarning) for w in caught))

    def test_cell_labels(self):
        labels = cell_labels(generate_named("RR", 5))
        self.assertEqual(labels[0], ["B_0", "M_4", "M'_3"])
        self.assertEqual(cell_labels(generate_named("PP1", 5))[0], ["B_0", "B_1^B_2", "B_3^B_4"])


if __name__ == "__main__":
    unittest.main()
