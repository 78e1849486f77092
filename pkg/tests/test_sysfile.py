import os

import pytest

import forcelab
from forcelab import sysfile
from forcelab.errors import SystemFileError, UnknownConditionError

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE_A = os.path.join(HERE, "fixtures", "sysA.fsys")
FIXTURE_A0 = os.path.join(HERE, "fixtures", "sysA0.fsys")


def test_load_fixture_file():
    ws = sysfile.load(FIXTURE_A)
    assert ws.system.order.conditions == ("1", "p", "q")
    assert len(ws.system.group) == 2
    assert "y" in ws.names
    assert "CP" in ws.classnames


def test_loaded_system_equals_family_build():
    ws = sysfile.load(FIXTURE_A)
    built = forcelab.build("SYS-A")
    assert ws.system == built.system
    assert ws.store.serialize(ws.names["y"]) == built.store.serialize(
        built.names["y"])


def test_serialize_round_trip_is_byte_stable(fx):
    text = sysfile.serialize(fx.ws)
    again = sysfile.serialize(sysfile.loads(text))
    assert text == again


def test_serialize_reload_preserves_semantics(fx):
    ws2 = sysfile.loads(sysfile.serialize(fx.ws))
    assert ws2.system == fx.system
    for label, name in fx.ws.names.items():
        assert ws2.store.serialize(ws2.names[label]) == fx.store.serialize(
            name)
    for label, cname in fx.ws.classnames.items():
        assert ws2.store.serialize(ws2.classnames[label].name) == (
            fx.store.serialize(cname.name))


def test_comments_and_blank_lines_ignored():
    text = open(FIXTURE_A).read()
    noisy = "# header\n\n" + text.replace("order", "# mid\norder", 1)
    ws = sysfile.loads(noisy)
    assert ws.system == forcelab.build("SYS-A").system


def test_missing_filterbase_is_an_error():
    with pytest.raises(SystemFileError) as info:
        sysfile.loads('system "t"\nconditions 1 p\norder p <= 1\n')
    assert "filter base required" in info.value.message


def test_missing_system_directive():
    with pytest.raises(SystemFileError):
        sysfile.loads("conditions 1 p\n")


def test_non_order_preserving_auto_fails_validation():
    text = (
        'system "broken"\n'
        "conditions 1 p q pp\n"
        "order p <= 1 ; q <= 1 ; pp <= p\n"
        "auto swap : p->q q->p\n"
        "group G = < swap >\n"
        "filterbase G\n")
    with pytest.raises(Exception) as info:
        sysfile.loads(text)
    assert "pp" in str(info.value) or "order" in str(info.value)


def test_non_bijective_auto_rejected():
    text = (
        'system "bad"\n'
        "conditions 1 p q\n"
        "order p <= 1 ; q <= 1\n"
        "auto squash : p->q\n"
        "group G = < squash >\n"
        "filterbase G\n")
    with pytest.raises(SystemFileError) as info:
        sysfile.loads(text)
    assert "bijection" in info.value.message


def test_error_carries_line_number():
    text = 'system "t"\nconditions 1 p\nwhatever x\n'
    with pytest.raises(SystemFileError) as info:
        sysfile.loads(text)
    assert info.value.line_no == 3


def test_unknown_condition_in_name():
    text = (
        'system "t"\n'
        "conditions 1 p\n"
        "order p <= 1\n"
        "filterbase G\n"
        "group G = < >\n"
        "name bad = { (bad,zz) }\n")
    with pytest.raises(SystemFileError):
        sysfile.loads(text)


def test_name_bodies():
    text = (
        'system "t"\n'
        "conditions 1 p\n"
        "order p <= 1\n"
        "group G = < >\n"
        "filterbase G\n"
        "name zero = { }\n"
        "name two = check 2\n"
        "name bul = bullet { zero two }\n")
    ws = sysfile.loads(text)
    assert ws.names["two"] is ws.store.check_name(2)
    assert ws.names["bul"] is ws.store.bullet([ws.names["zero"],
                                               ws.names["two"]])


def test_resolve_condition_root_alias():
    ws = sysfile.load(FIXTURE_A)
    assert ws.resolve_condition("root") == "1"
    assert ws.resolve_condition("p") == "p"
    with pytest.raises(UnknownConditionError):
        ws.resolve_condition("nope")


def test_workspace_resolve_name():
    ws = sysfile.load(FIXTURE_A)
    assert ws.resolve_name("y") is ws.names["y"]
    assert ws.resolve_name("CP") is ws.classnames["CP"]
