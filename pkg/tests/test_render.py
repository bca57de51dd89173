import logging
import unittest

from hypothesis import HealthCheck, given, settings
import hypothesis.strategies as st

from slopegaps import render
from slopegaps.render import Body, H1, Html, P, StatusCell, Table, Td, Th, Tr


class ElementTest:
    Template = None
    # the mixin's @given tests run once per concrete element class
    shared = settings(suppress_health_check=[HealthCheck.differing_executors])

    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def do_basic(self, *args, **kwargs):
        self.logger.info("Can create...")
        obj = self.Template(*args, **kwargs)
        self.logger.info("Can draw()")
        drawn = obj.draw()
        self.assertIsInstance(drawn, str)
        return drawn

    @shared
    @given(s=st.text())
    def test_repr(self, s):
        obj = self.Template(s)
        namespace = {name: getattr(render, name) for name in dir(render)}
        self.assertEqual(eval(repr(obj), namespace).draw(), obj.draw())

    @shared
    @given(s=st.text())
    def test_single_str(self, s):
        drawn = self.do_basic(s)
        self.assertNotIn("<script", drawn.lower().replace(f"<{self.Template.tag}", ""))

    @shared
    @given(lst=st.lists(st.text(), max_size=5))
    def test_list_strs(self, lst):
        self.do_basic(*lst)


class TestTd(ElementTest, unittest.TestCase):
    Template = Td

    def test_escapes(self):
        self.assertEqual(Td("a<b & c").draw(), "<td>a&lt;b &amp; c</td>")

    def test_attributes(self):
        self.assertEqual(Td("x", class_="wide", data_id=3).draw(), '<td class="wide" data-id="3">x</td>')


class TestP(ElementTest, unittest.TestCase):
    Template = P


class TestH1(ElementTest, unittest.TestCase):
    Template = H1


class TestStructure(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def test_row_joins_cells(self):
        self.assertEqual(Tr(Td(1), Td(2.5)).draw(), "<tr><td>1</td><td>2.5</td></tr>")

    def test_status_cell(self):
        self.assertEqual(StatusCell(True).draw(), '<td class="pass">PASS</td>')
        self.assertEqual(StatusCell(False).draw(), '<td class="fail">FAIL</td>')

    def test_call_copies(self):
        cell = Th("k", class_="num")
        copy = cell(class_="wide")
        self.assertEqual(copy.draw(), '<th class="wide">k</th>')
        self.assertEqual(cell.draw(), '<th class="num">k</th>')

    def test_document(self):
        drawn = Html(Body(Table(Tr(Td("x"))))).draw()
        self.assertTrue(drawn.startswith("<!DOCTYPE html>\n<html lang=\"en\">"))
        self.assertTrue(drawn.endswith("</html>\n"))

    def test_report(self):
        report = render.html_report("check <n>", ("name", "status"), [("a", True), ("b", False)], "1/2")
        self.assertIn("<title>check &lt;n&gt;</title>", report)
        self.assertIn('<td class="fail">FAIL</td>', report)
        self.assertIn('<meta charset="utf-8">', report)

    def test_text_table(self):
        table = render.text_table(("check", "status"), [("geometry", True), ("kinks", False)])
        lines = table.splitlines()
        self.assertEqual(lines[0], "check     status")
        self.assertEqual(lines[1], "--------  ------")
        self.assertEqual(lines[2], "geometry  PASS")
        self.assertEqual(lines[3], "kinks     FAIL")
        self.assertTrue(table.endswith("\n"))
