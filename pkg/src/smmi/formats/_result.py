__all__ = ["Failure", "Result", "Success"]

from typing import TypeVar

from returns import result

from ..exceptions import SmmiError

Output = TypeVar("Output")

# Reexport Returns Result types with the smmi error type
# Failure is replaced by plain Failure, which works at runtime
Result = result.Result[Output, SmmiError]
Success = result.Success
Failure: type[result.Failure[SmmiError]] = result.Failure[SmmiError]
Failure = result.Failure
