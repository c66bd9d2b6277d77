ZERO_CELSIUS = 273.15


def celsius_to_kelvin(t_c: float) -> float:
    return t_c + ZERO_CELSIUS


def kelvin_to_celsius(t_k: float) -> float:
    return t_k - ZERO_CELSIUS
