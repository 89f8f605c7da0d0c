"""Layout, DOT and SVG emission: determinism, conventions, geometry."""

from __future__ import annotations

import random
import xml.etree.ElementTree as ET

import pytest

from lawmap import batch_route, doc_is_connected, emit_dot, emit_svg, layout, parse_set
from tests._gen import gen_clean_doc, gen_doc


def test_dot_structure_s24c(s24c_set):
    dot = emit_dot(s24c_set.root_doc)
    assert dot.startswith('digraph "s24c" {')
    assert dot.count("shape=diamond") == 3
    assert dot.count("shape=oval") == 4  # one entry, three exits
    assert 'opposed [shape=diamond, label="Landlord opposition"];' in dot
    assert '  opposed -> resolve_terms [label="no"];' in dot
    assert dot.rstrip().endswith("}")


def test_dot_lanes_and_dependencies(conveyancing_set):
    dot = emit_dot(conveyancing_set.root_doc)
    assert "subgraph cluster_seller {" in dot
    assert "subgraph cluster_buyer {" in dot
    assert '    label="Seller";' in dot
    assert "  s_deduce -> b_investigate [style=dashed];" in dot


def test_dot_nested_node_doubled(conveyancing_set):
    dot = emit_dot(conveyancing_set.root_doc)
    assert 's_instruct [shape=box, label="Take instructions", peripheries=2];' in dot


def test_dot_multilevel_as_comment():
    lawmap_set, _ = parse_set(
        'lawmap a "A" { entry e exit x flow e -> x link a.x -> b.e }\n'
        'lawmap b "B" { entry e }'
    )
    dot = emit_dot(lawmap_set.root_doc)
    assert "  // link a.x -> b.e" in dot


def test_render_byte_determinism(s24c_set, conveyancing_set):
    for doc in (s24c_set.root_doc, conveyancing_set.root_doc):
        assert emit_dot(doc) == emit_dot(doc)
        assert emit_svg(doc) == emit_svg(doc)


def test_svg_well_formed_and_ids(s24c_set):
    svg = emit_svg(s24c_set.root_doc)
    root = ET.fromstring(svg)
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    ids = {el.get("id") for el in root.iter() if el.get("id")}
    for node in s24c_set.root_doc.nodes:
        assert f"root/{node.id}" in ids
    for edge in s24c_set.root_doc.edges:
        assert f"root/{edge.id}" in ids


def test_svg_lane_bands(conveyancing_set):
    svg = emit_svg(conveyancing_set.root_doc)
    assert svg.count('class="lane-band"') == 2
    assert ">Seller</text>" in svg and ">Buyer</text>" in svg
    assert 'class="edge dep"' in svg  # dashed dependency styling


def test_svg_footnotes(s24c_set):
    svg = emit_svg(s24c_set.root_doc)
    assert ">Sources</text>" in svg
    assert "Cardshops v Davies [1971] 1 WLR 591" in svg
    assert "Landlord and Tenant Act 1954, s 24C(1)" in svg
    assert 'class="ref-marker"' in svg


def test_svg_highlight_route(s24c_set, s24c_rs):
    route = batch_route(
        s24c_rs,
        {"root/opposed": "no", "root/differs_3b": "no", "root/differs_3a": "yes"},
    )
    svg = emit_svg(s24c_set.root_doc, highlight=route)
    assert '<g id="root/out_5" class="node highlight">' in svg
    assert '<g id="root/out_2" class="node">' in svg
    highlighted = svg.count('class="node highlight"')
    assert highlighted == len(route.completed)
    assert 'class="edge highlight"' in svg


def test_svg_highlight_unknown_node_rejected(s24c_set, conveyancing_rs):
    from lawmap import init_route

    foreign = init_route(conveyancing_rs)
    with pytest.raises(ValueError):
        emit_svg(s24c_set.root_doc, highlight=foreign)


def test_layout_no_overlap_fixtures(s24c_set, conveyancing_set):
    for doc in (s24c_set.root_doc, conveyancing_set.root_doc):
        _assert_no_overlap(doc)


def _assert_no_overlap(doc):
    lg = layout(doc)
    boxes = [(n.x, n.y, n.x + n.width, n.y + n.height, n.id) for n in lg.nodes]
    for i, a in enumerate(boxes):
        for b in boxes[i + 1:]:
            disjoint = a[2] <= b[0] or b[2] <= a[0] or a[3] <= b[1] or b[3] <= a[1]
            assert disjoint, f"{a[4]} overlaps {b[4]} in {doc.id}"


def test_layout_no_overlap_100_generated():
    rng = random.Random(606060)
    for _ in range(100):
        _assert_no_overlap(gen_clean_doc(rng, max_nodes=18))


def test_layout_survives_arbitrary_docs():
    # broken documents (dangling edges, cycles) still get a drawable layout
    rng = random.Random(70707)
    for i in range(25):
        doc = gen_doc(rng, doc_id=f"g{i}", max_nodes=20)
        lg = layout(doc)
        assert len(lg.nodes) == len(doc.nodes)
        svg = emit_svg(doc)
        ET.fromstring(svg)


def test_lane_bands_in_declaration_order(conveyancing_set):
    lg = layout(conveyancing_set.root_doc)
    assert [band.lane_id for band in lg.lanes] == ["seller", "buyer"]
    assert lg.lanes[0].x_max <= lg.lanes[1].x_min
    for node in lg.nodes:
        doc_node = conveyancing_set.root_doc.node(node.id)
        if doc_node.lane is None:
            continue
        band = next(b for b in lg.lanes if b.lane_id == doc_node.lane)
        assert band.x_min <= node.x and node.x + node.width <= band.x_max


def test_doc_is_connected(s24c_set):
    assert doc_is_connected(s24c_set.root_doc)
    broken, _ = parse_set('lawmap m "T" { entry a exit z activity orphan flow a -> z }')
    assert not doc_is_connected(broken.root_doc)
