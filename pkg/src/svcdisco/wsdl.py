"""Extraction of service metadata from WSDL 1.1 documents.

Only the parts needed for registration and keyword matching are read:
``definitions``, ``service``, ``portType``/``operation``, ``message``/``part``
and every ``documentation`` element. Bindings and types are skipped.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .taxonomy import BehaviorCategory

WSDL_NS = "http://schemas.xmlsoap.org/wsdl/"


class WsdlError(ValueError):
    """Malformed or unusable WSDL document."""


class EmptyServiceError(WsdlError):
    """The document declares no operations."""


@dataclass(frozen=True)
class WsdlOperation:
    name: str
    has_input: bool
    has_output: bool
    documentation: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise WsdlError("operation name must be non-empty")
        if not (self.has_input or self.has_output):
            raise WsdlError(f"operation {self.name!r} has neither input nor output")


@dataclass(frozen=True)
class WsdlDocument:
    service_name: str
    documentation: str
    operations: tuple[WsdlOperation, ...]
    source_uri: str = ""
    target_namespace: str = field(default="urn:svcdisco", compare=False)

    def __post_init__(self) -> None:
        if not self.service_name:
            raise WsdlError("service name must be non-empty")
        if not self.operations:
            raise EmptyServiceError(f"service {self.service_name!r} has no operations")

    def all_documentation(self) -> str:
        parts = [self.documentation] + [op.documentation for op in self.operations]
        return " ".join(p for p in parts if p)

    def signature(self) -> tuple:
        """Name plus per-operation (name, has_input, has_output)."""
        return (
            self.service_name,
            tuple((op.name, op.has_input, op.has_output) for op in self.operations),
        )


_TOKEN_RE = re.compile(r"[a-z0-9]+")
_CAMEL_RE = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumerics."""
    return _TOKEN_RE.findall(text.lower())


def tokenize_name(name: str) -> list[str]:
    """Like :func:`tokenize`, but also splits CamelCase identifiers."""
    return tokenize(_CAMEL_RE.sub(" ", name))


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def _children(elem: ET.Element, name: str) -> list[ET.Element]:
    return [c for c in elem if _local(c.tag) == name]


def _doc_text(elem: ET.Element) -> str:
    texts = []
    for d in _children(elem, "documentation"):
        text = " ".join("".join(d.itertext()).split())
        if text:
            texts.append(text)
    return " ".join(texts)


def _qname_local(ref: str | None) -> str:
    if not ref:
        return ""
    return ref.split(":", 1)[-1]


def parse_wsdl(data: bytes | str, source_uri: str = "") -> WsdlDocument:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise WsdlError(f"{source_uri or '<wsdl>'}: malformed XML: {exc}") from None
    if _local(root.tag) != "definitions":
        raise WsdlError(f"{source_uri or '<wsdl>'}: root element is not wsdl:definitions")

    part_counts = {
        msg.get("name", ""): len(_children(msg, "part")) for msg in _children(root, "message")
    }

    def message_has_parts(io: list[ET.Element]) -> bool:
        if not io:
            return False
        return part_counts.get(_qname_local(io[0].get("message")), 0) > 0

    operations = []
    for port_type in _children(root, "portType"):
        for op in _children(port_type, "operation"):
            operations.append(
                WsdlOperation(
                    name=op.get("name", ""),
                    has_input=message_has_parts(_children(op, "input")),
                    has_output=message_has_parts(_children(op, "output")),
                    documentation=_doc_text(op),
                )
            )

    services = _children(root, "service")
    port_types = _children(root, "portType")
    name = (
        (services[0].get("name") if services else None)
        or root.get("name")
        or (port_types[0].get("name") if port_types else None)
        or ""
    )
    docs = [_doc_text(root)] + [_doc_text(e) for e in port_types + services]
    if not name:
        raise WsdlError(f"{source_uri or '<wsdl>'}: no service name found")
    if not operations:
        raise EmptyServiceError(f"{source_uri or '<wsdl>'}: service {name!r} has no operations")
    return WsdlDocument(
        service_name=name,
        documentation=" ".join(d for d in docs if d),
        operations=tuple(operations),
        source_uri=source_uri,
        target_namespace=root.get("targetNamespace", "urn:svcdisco"),
    )


def load_wsdl(path: str | Path) -> WsdlDocument:
    path = Path(path)
    return parse_wsdl(path.read_bytes(), source_uri=str(path))


def suggest_behavior(doc: WsdlDocument) -> BehaviorCategory:
    """Behavior category implied by the operations' message signatures.

    Output-less everywhere means Collective, input-less everywhere means
    Notifying, anything else is Interactive.
    """
    if not any(op.has_output for op in doc.operations):
        return BehaviorCategory.COLLECTIVE
    if not any(op.has_input for op in doc.operations):
        return BehaviorCategory.NOTIFYING
    return BehaviorCategory.INTERACTIVE


def render_wsdl(doc: WsdlDocument) -> str:
    """Serialize the extracted metadata back into a minimal WSDL 1.1 document."""
    tns = doc.target_namespace
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<wsdl:definitions xmlns:wsdl="{WSDL_NS}" xmlns:xsd="http://www.w3.org/2001/XMLSchema"'
        f" xmlns:tns={quoteattr(tns)} targetNamespace={quoteattr(tns)}"
        f" name={quoteattr(doc.service_name)}>",
    ]
    for op in doc.operations:
        if op.has_input:
            out.append(f'  <wsdl:message name={quoteattr(op.name + "Request")}>')
            out.append('    <wsdl:part name="request" type="xsd:string"/>')
            out.append("  </wsdl:message>")
        if op.has_output:
            out.append(f'  <wsdl:message name={quoteattr(op.name + "Response")}>')
            out.append('    <wsdl:part name="response" type="xsd:string"/>')
            out.append("  </wsdl:message>")
    out.append(f"  <wsdl:portType name={quoteattr(doc.service_name + 'PortType')}>")
    for op in doc.operations:
        out.append(f"    <wsdl:operation name={quoteattr(op.name)}>")
        if op.documentation:
            out.append(f"      <wsdl:documentation>{escape(op.documentation)}</wsdl:documentation>")
        if op.has_input:
            out.append(f"      <wsdl:input message={quoteattr('tns:' + op.name + 'Request')}/>")
        if op.has_output:
            out.append(f"      <wsdl:output message={quoteattr('tns:' + op.name + 'Response')}/>")
        out.append("    </wsdl:operation>")
    out.append("  </wsdl:portType>")
    out.append(f"  <wsdl:service name={quoteattr(doc.service_name)}>")
    if doc.documentation:
        out.append(f"    <wsdl:documentation>{escape(doc.documentation)}</wsdl:documentation>")
    out.append("  </wsdl:service>")
    out.append("</wsdl:definitions>")
    return "\n".join(out) + "\n"
