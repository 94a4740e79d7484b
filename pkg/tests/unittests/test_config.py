from pytest import mark, raises

from hydrobracket.config import LogLevel, Settings, get_settings, non_negative, settings_ev, wide_enough


def test_defaults():
    assert get_settings() == Settings()


def test_from_env(monkeypatch):
    monkeypatch.setenv("HYDROBRACKET_LOG_LEVEL", "debug")
    monkeypatch.setenv("HYDROBRACKET_REPORT_WIDTH", "60")
    assert get_settings() == Settings(log_level=LogLevel.DEBUG, report_width=60)


def test_invalid_env(monkeypatch):
    monkeypatch.setenv("HYDROBRACKET_REPORT_WIDTH", "10")
    with raises(ValueError):
        get_settings()
    monkeypatch.setenv("HYDROBRACKET_REPORT_WIDTH", "80")
    monkeypatch.setenv("HYDROBRACKET_LOG_LEVEL", "verbose")
    with raises(ValueError):
        get_settings()


def test_residual_limit_not_configurable(monkeypatch):
    monkeypatch.setenv("HYDROBRACKET_RESIDUAL_LIMIT", "1")
    assert get_settings() == Settings()


@mark.parametrize(("func", "value"), [(non_negative, -1), (wide_enough, 39)])
def test_validators(func, value):
    assert func(value + 1) == value + 1
    with raises(ValueError):
        func(value)


def test_patch():
    with settings_ev.patch(Settings(report_width=40)):
        assert get_settings().report_width == 40
    assert get_settings() == Settings()
