class BenchmarkException(Exception):
    def __init__(self, message):
        super().__init__(message)


class ExplicitSyntaxError(BenchmarkException):
    def __init__(self, message, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ExplicitSemanticError(BenchmarkException):
    def __init__(self, message, line_number: int = 0):
        prefix = f"line {line_number}: " if line_number else ""
        super().__init__(f"{prefix}{message}")
        self.line_number = line_number
