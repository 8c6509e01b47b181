"""Creation of functions from configuration trees.

Configuration keys per type id::

    xt.functions.constant      value
    xt.functions.checkerboard  lower_left, upper_right, num_elements, values
    xt.functions.expression    variable, order, expression, gradient | gradient.0, gradient.1, ...

All types accept an optional ``name``.
"""

from xtkit.common.config import ConfigTree, ValueKind
from xtkit.common.exceptions import ConfigError, FactoryError, ParseError
from xtkit.common.strings import parse_value
from xtkit.functions.checkerboard import CheckerboardFunction
from xtkit.functions.constant import ConstantFunction
from xtkit.functions.expression import ExpressionFunction


def _constant(cfg, dim):
    try:
        value = parse_value(cfg.get('value'))
    except ParseError as err:
        raise err.with_key('value') from None
    return ConstantFunction(value, dim, cfg.get('name', str, 'constant'))


def _checkerboard(cfg, dim):
    size = dim or 0
    lower_left = cfg.get('lower_left', ValueKind.vector(size))
    d = len(lower_left)
    try:
        return CheckerboardFunction(lower_left,
                                    cfg.get('upper_right', ValueKind.vector(d)),
                                    cfg.get('num_elements', ValueKind.vector(d, int)),
                                    cfg.get('values', ValueKind.vector()),
                                    cfg.get('name', str, 'checkerboard'))
    except ValueError as err:
        if isinstance(err, ParseError):
            raise
        raise ConfigError(f'invalid checkerboard configuration: {err}') from None


def _expression(cfg, dim):
    variable = cfg.get('variable', str, 'x')
    gradients = None
    if 'gradient' in cfg:
        gradients = [cfg.get('gradient')]
    elif 'gradient.0' in cfg:
        gradients = []
        while f'gradient.{len(gradients)}' in cfg:
            gradients.append(cfg.get(f'gradient.{len(gradients)}'))
    order = cfg.get('order', int)
    try:
        return ExpressionFunction(variable, cfg.get('expression'), order, gradients, dim,
                                  cfg.get('name', str, 'expression'))
    except ParseError as err:
        raise err.with_key('expression' if gradients is None else 'expression/gradient') from None
    except ValueError as err:
        raise ConfigError(f'invalid expression configuration: {err}') from None


def _default(type_id):
    if type_id == FunctionsFactory.CONSTANT:
        return ConfigTree(value='1')
    if type_id == FunctionsFactory.CHECKERBOARD:
        return ConfigTree(lower_left='[0. 0.]', upper_right='[1. 1.]', num_elements='[2 2]', values='[1. 2. 3. 4.]')
    return ConfigTree({'variable': 'x', 'order': '3', 'expression': '[x[0] sin(x[1])]',
                       'gradient.0': '[1 0]', 'gradient.1': '[0 cos(x[1])]'})


class FunctionsFactory:

    CONSTANT = 'xt.functions.constant'
    CHECKERBOARD = 'xt.functions.checkerboard'
    EXPRESSION = 'xt.functions.expression'

    _creators = {CONSTANT: _constant, CHECKERBOARD: _checkerboard, EXPRESSION: _expression}

    @classmethod
    def available(cls):
        return list(cls._creators)

    @classmethod
    def default_config(cls, type_id):
        if type_id not in cls._creators:
            raise FactoryError(type_id, cls.available(), 'function')
        return _default(type_id)

    @classmethod
    def create(cls, type_id, cfg=None, dim=None):
        """Create the function ``type_id`` from ``cfg``.

        ``dim`` fixes the domain dimension (and truncates vector valued
        configuration entries to it); ``None`` keeps it open where possible.
        """
        if type_id not in cls._creators:
            raise FactoryError(type_id, cls.available(), 'function')
        if cfg is None:
            cfg = cls.default_config(type_id)
        return cls._creators[type_id](cfg, dim)


def functions_factory_create(type_id, cfg, dim=None):
    return FunctionsFactory.create(type_id, cfg, dim)
