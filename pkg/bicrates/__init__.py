# bicrates - rate regions of the two-user broadcast interference channel
# Copyright 2025 Tom Sapletta
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

__version__ = "0.1.0"

# Export main functionality
from .errors import (
    BicratesError, InfeasibleError, PreconditionError, UnboundedError, ValidationError,
)
from .polyhedra import (
    Inequality, LinSystem, RatePoint, contains, enumerate_vertices, fme_eliminate, fme_eliminate_all,
    implies, pareto_filter, remove_redundant,
)

# Make the CLI accessible
from .cli import main as cli_main
