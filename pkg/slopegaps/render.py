"""Tag elements for verification reports, plus a plain-text table."""
import html
import logging
from typing import Any, Dict, List, Sequence

from .funcs import list_to_str


class TagDescriptor:
    def __get__(self, obj, owner):
        if obj is not None and obj._tag:
            return obj._tag
        if owner._tag:
            return owner._tag
        return owner.__name__.lower()

    def __set__(self, obj, value):
        obj._tag = value


class BlockDescriptor:
    def get_block(self, closing=True):
        return "<{tag}{kwargs}>{content}</{tag}>" if closing else "<{tag}{kwargs}>"

    def __get__(self, obj, owner):
        if obj is not None and obj._block:
            return obj._block
        if owner._block:
            return owner._block
        return self.get_block(owner.closing)


class Element:
    closing: bool = True
    defaults: Dict[str, Any] = {}
    _tag: str = ""
    tag = TagDescriptor()
    _block: str = ""
    block = BlockDescriptor()

    def __init__(self, *args, **kwargs) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.args = args
        self._kwargs = kwargs
        self.kwargs = {
            **{k: v for k, v in self.defaults.items() if not k.startswith("_")},
            **{k: v for k, v in kwargs.items() if not k.startswith("_")},
        }

    def __iter__(self):
        return (arg for arg in self.args)

    def __call__(self, *args, **kwargs):
        args = args if args else self.args
        kwargs = {**self._kwargs, **kwargs}
        return self.__class__(*args, **kwargs)

    def __repr__(self) -> str:
        parts = [repr(arg) for arg in self.args]
        parts += [f"{k}={v!r}" for k, v in self._kwargs.items()]
        return f"{self.__class__.__qualname__}({', '.join(parts)})"

    def get(self, key, *args) -> Any:
        return {**self.defaults, **self._kwargs}.get(key, *args)

    @staticmethod
    def draw_arg(arg) -> str:
        if isinstance(arg, Element):
            return arg.draw()
        return html.escape(list_to_str(arg), quote=False)

    def get_content(self) -> str:
        return "\n".join(self.draw_arg(arg) for arg in self.args)

    def get_kwargs(self) -> str:
        s = ""
        for key, value in self.kwargs.items():
            if key == "class_":
                key = "class"
            key = key.replace("_", "-")
            s += f' {key}="{html.escape(list_to_str(value))}"'
        return s

    def draw(self) -> str:
        return self.block.format(tag=self.tag, kwargs=self.get_kwargs(), content=self.get_content())


class Html(Element):
    defaults = {"lang": "en"}
    _block = "<!DOCTYPE html>\n<html{kwargs}>\n{content}\n</html>\n"


class Head(Element):
    pass


class Meta(Element):
    closing = False
    defaults = {"charset": "utf-8"}


class Title(Element):
    pass


class Style(Element):
    pass


class Body(Element):
    pass


class H1(Element):
    pass


class P(Element):
    pass


class Table(Element):
    pass


class Tr(Element):
    def get_content(self) -> str:
        return "".join(self.draw_arg(arg) for arg in self.args)


class Th(Element):
    pass


class Td(Element):
    pass


class StatusCell(Td):
    _tag = "td"

    def __init__(self, passed: bool, **kwargs) -> None:
        super().__init__("PASS" if passed else "FAIL", class_="pass" if passed else "fail", **kwargs)
        self.passed = passed


REPORT_STYLE = "table { border-collapse: collapse } td, th { padding: 2px 8px } .pass { color: #070 } .fail { color: #b00 }"


def status(value: Any) -> str:
    if isinstance(value, bool):
        return "PASS" if value else "FAIL"
    return list_to_str(value)


def text_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells: List[List[str]] = [list(header)] + [[status(value) for value in row] for row in rows]
    widths = [max(len(row[j]) for row in cells) for j in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def html_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Table:
    body = [Tr(*[Th(name) for name in header])]
    for row in rows:
        body.append(Tr(*[StatusCell(value) if isinstance(value, bool) else Td(value) for value in row]))
    return Table(*body)


def html_report(title: str, header: Sequence[str], rows: Sequence[Sequence[Any]], summary: str = "") -> str:
    return Html(
        Head(Meta(), Title(title), Style(REPORT_STYLE)),
        Body(H1(title), html_table(header, rows), P(summary)),
    ).draw()
