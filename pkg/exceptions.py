class DimensionError(ValueError):
    def __init__(self, op: str, left_shape, right_shape):
        super(DimensionError, self).__init__(
            '{}: incompatible shapes {} and {}'.format(op, tuple(left_shape), tuple(right_shape)))
        self.left_shape = tuple(left_shape)
        self.right_shape = tuple(right_shape)


class NumericError(ValueError):
    def __init__(self, param_name: str, message: str = 'non-finite gradient'):
        super(NumericError, self).__init__('{} in parameter {}'.format(message, param_name))
        self.param_name = param_name


class ContractError(ValueError):
    pass


class ClipParseError(ValueError):
    def __init__(self, path, line_no: int, reason: str):
        super(ClipParseError, self).__init__('{}:{}: {}'.format(path, line_no, reason))
        self.path = path
        self.line_no = line_no


class ValidationError(ValueError):
    def __init__(self, field: str, frame_index: int, reason: str, clip_id: str = None):
        where = 'frame {}'.format(frame_index) if clip_id is None else 'clip {} frame {}'.format(clip_id, frame_index)
        super(ValidationError, self).__init__('{}: invalid {}: {}'.format(where, field, reason))
        self.field = field
        self.frame_index = frame_index


class ConfigurationError(ValueError):
    pass


class UnsupportedDirectionError(ValueError):
    def __init__(self, missing):
        missing = sorted(missing)
        super(UnsupportedDirectionError, self).__init__(
            'no displacement matrix for direction(s): {}'.format(', '.join(missing)))
        self.missing = missing
