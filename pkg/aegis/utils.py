#
#   Copyright (c) 2026, The aegis developers
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#

import hashlib

import numpy


class AegisError(Exception):
    """ Base class for all other exceptions in this package. """
    def __init__(self, msg=None):
        if msg:
            self.msg = msg
        else:
            self.msg = "aegis error."
        Exception.__init__(self, self.msg)

    def __str__(self):
        return self.msg


class AegisDomainError(AegisError):
    """ A numeric argument is outside the domain of the operation. """
    pass


class AegisStructuralError(AegisError):
    """ Shapes, lengths or arities do not match what the operation needs. """
    pass


class AegisConfigError(AegisError):
    def __init__(self, msg=None, lineno=None):
        if lineno is not None and msg:
            msg = "Line %d: %s" % (lineno, msg)
        elif not msg:
            msg = "Invalid scenario. Try 'help run' for the list of scenario keys."
        self.lineno = lineno
        AegisError.__init__(self, msg)


class AegisFormatError(AegisError):
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        AegisError.__init__(self, "File %s is not a valid aegis artifact: %s." % (path, reason))


class AegisIOError(AegisError):
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        AegisError.__init__(self, "Could not read or write %s: %s." % (path, reason))


class AegisNumericError(AegisError):
    def __init__(self, quantity, value, slot=None):
        self.quantity = quantity
        self.value = value
        self.slot = slot
        if slot is None:
            msg = "Non-finite %s encountered: %r." % (quantity, value)
        else:
            msg = "Non-finite %s encountered at slot %d: %r." % (quantity, slot, value)
        AegisError.__init__(self, msg)


class AegisColdStartError(AegisError):
    """
    Raised when an observation is requested for a slot that has no history yet.
    Callers substitute the neutral observation.
    """
    def __init__(self, slot, needed):
        self.slot = slot
        self.needed = needed
        AegisError.__init__(self, "Slot %d has no observable history (needs slot >= %d)."
                            % (slot, needed))


def check_finite(quantity, value, slot=None):
    if not numpy.all(numpy.isfinite(value)):
        raise AegisNumericError(quantity, value, slot)
    return value


def require(condition, msg, error=AegisDomainError):
    if not condition:
        raise error(msg)


def digest_bytes(data, length=12):
    return hashlib.sha1(data).hexdigest()[:length]


def digest_text(text, length=12):
    return digest_bytes(text.encode('utf-8'), length)


def digest_arrays(arrays, length=12):
    h = hashlib.sha1()
    for array in arrays:
        h.update(numpy.ascontiguousarray(array, dtype='<f8').tobytes())
    return h.hexdigest()[:length]


def format_float(value):
    """ Shortest decimal string that round-trips to the same double. """
    return repr(float(value))
