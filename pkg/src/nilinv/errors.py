class InputError(ValueError):
    """Malformed input: size mismatch, singular change of basis, bad word, etc."""


class SamplingError(RuntimeError):
    """Random evaluation points failed to stabilize a rank computation.

    Retrying with a different seed is the expected remedy.
    """
