"""Translation work list: fragment ordering and test decomposition."""

from fragport.decompose.order import TranslationOrder, order_fragments, order_graph
from fragport.decompose.testchain import (
    TestFragment, TestFragmentChain, decompose_all, decompose_test, execute_chain,
)

__all__ = [
    "TestFragment", "TestFragmentChain", "TranslationOrder", "decompose_all",
    "decompose_test", "execute_chain", "order_fragments", "order_graph",
]
