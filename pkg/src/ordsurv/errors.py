"""Exception hierarchy shared by every module.

``DataError`` covers malformed or unusable input. ``StatisticalError`` covers
inputs that are well formed but leave a test undefined. The CLI maps them to
exit codes 2 and 3.
"""


class OrdSurvError(ValueError):
    pass


class DataError(OrdSurvError):
    pass


class StatisticalError(OrdSurvError):
    pass
