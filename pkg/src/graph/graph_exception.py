class GraphException(Exception):
    def __init__(self, message):
        super().__init__(message)


class BudgetExceededException(GraphException):
    def __init__(self, message):
        super().__init__(message)
