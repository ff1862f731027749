"""Progress and diagnostic events.

Named emitters form a dotted hierarchy the same way logger names do:
``get_emitter("railgauge.measurement")`` is a child of ``"railgauge"``,
which is a child of the root emitter. An emitted event is delivered to the
emitter's own listeners and then to the listeners of each ancestor, unless
``propagate`` is switched off along the way.

Example::

    from railgauge import progress

    @progress.get_emitter("railgauge").on("measurement.finished")
    def show(report):
        print(report.overall)
"""

from __future__ import annotations

from collections import defaultdict
from collections import deque
from contextvars import ContextVar
import threading
from typing import Any
from typing import Callable
from typing import Generator
from typing import Union
import warnings

from .validation import validate_arguments

_module_lock = threading.RLock()

Listener = Callable[..., Any]
DeferredEmitItem = tuple["Emitter", str, tuple, "dict[str, Any]"]


def event_name_validator(event_name: Any) -> None:
    if not isinstance(event_name, str):
        raise TypeError("event name must be a string")
    if event_name == "":
        raise ValueError("event name must not be empty")
    return None


class PlaceHolder:
    """Stands in for a not yet requested emitter in the middle of a name."""

    def __init__(self, emitter: Emitter):
        self.children = {emitter}

    def add_child(self, emitter: Emitter) -> None:
        self.children.add(emitter)


class Registry:
    def __init__(self, root_node: Emitter):
        self.root = root_node
        self.emitter_dict: dict[str, Union[Emitter, PlaceHolder]] = {}

    def get_emitter(self, name: str) -> Emitter:
        if not isinstance(name, str):
            raise TypeError("An emitter name must be a string")
        with _module_lock:
            if name in self.emitter_dict:
                emitter = self.emitter_dict[name]
                if isinstance(emitter, PlaceHolder):
                    place_holder, emitter = emitter, Emitter(name)
                    self.emitter_dict[name] = emitter
                    self._fixup_children(place_holder, emitter)
                    self._fixup_parents(emitter)
            else:
                emitter = Emitter(name)
                self.emitter_dict[name] = emitter
                self._fixup_parents(emitter)
        return emitter

    def _fixup_children(self, place_holder: PlaceHolder, emitter: Emitter) -> None:
        name = emitter.name
        for child in place_holder.children:
            parent = child.parent
            # a child may already hang below a nearer emitter inside `name`
            if parent is None or not parent.name.startswith(name + "."):
                child.parent = emitter

    def _fixup_parents(self, emitter: Emitter) -> None:
        name = emitter.name
        idx = name.rfind(".")
        real_parent = None
        while idx > 0 and real_parent is None:
            parent_name = name[:idx]
            if parent_name not in self.emitter_dict:
                self.emitter_dict[parent_name] = PlaceHolder(emitter)
            else:
                potential_parent = self.emitter_dict[parent_name]
                if isinstance(potential_parent, Emitter):
                    real_parent = potential_parent
                else:
                    potential_parent.add_child(emitter)
            idx = parent_name.rfind(".")
        emitter.parent = real_parent if real_parent is not None else self.root


class Emitter:
    registry: Registry
    root: RootEmitter
    _deferred_emits_var: ContextVar[deque[DeferredEmitItem]] = ContextVar(
        "railgauge_deferred_emits"
    )

    def __init__(self, name: str):
        self.name = name
        self.parent: Emitter | None = None
        self.propagate = True
        self._listeners: defaultdict[str, list[Listener]] = defaultdict(list)
        self._lock = threading.Lock()

    @validate_arguments(event_name_validator)
    def listener_count(self, event_name: str, /) -> int:
        with self._lock:
            return len(self._listeners[event_name])

    @validate_arguments(event_name_validator)
    def listeners(self, event_name: str, /) -> list[Listener]:
        with self._lock:
            return self._listeners[event_name].copy()

    @validate_arguments(event_name_validator)
    def add_listener(self, event_name: str, /, listener: Listener) -> Emitter:
        with self._lock:
            self._listeners[event_name].append(listener)
        return self

    @validate_arguments(event_name_validator)
    def remove_listener(self, event_name: str, /, listener: Listener) -> Emitter:
        try:
            with self._lock:
                self._listeners[event_name].remove(listener)
        except ValueError:
            warnings.warn("Attempted to remove listener not present.")
        return self

    @validate_arguments(event_name_validator)
    def on(self, event_name: str, /):
        def inner(listener: Listener) -> Listener:
            self.add_listener(event_name, listener)
            return listener

        return inner

    @validate_arguments(event_name_validator)
    def emit(self, event_name: str, /, *args, **kwargs) -> bool:
        """Deliver an event to this emitter and its ancestors.

        Listeners that emit again have their events queued and delivered
        after the current delivery finishes, so emitting never recurses.

        Returns:
            True if at least one listener (here or up the hierarchy) was
            registered for the event when it was emitted.
        """
        had_listeners = bool(self._chain_listeners(event_name))
        for emitter, name, a, kw in self._defer_emits(event_name, args, kwargs):
            for listener in emitter._chain_listeners(name):
                listener(*a, **kw)
        return had_listeners

    def _chain_listeners(self, event_name: str) -> list[Listener]:
        collected: list[Listener] = []
        emitter: Emitter | None = self
        while emitter is not None:
            with emitter._lock:
                collected.extend(emitter._listeners.get(event_name, ()))
            if not emitter.propagate:
                break
            emitter = emitter.parent
        return collected

    def _defer_emits(
        self, event_name: str, args: tuple, kwargs: dict[str, Any]
    ) -> Generator[DeferredEmitItem, None, None]:
        item: DeferredEmitItem = (self, event_name, args, kwargs)
        try:
            deferred_emits = self._deferred_emits_var.get()
        except LookupError:
            # outermost emit; this generator drains the queue
            deferred_emits = deque((item,))
            token = self._deferred_emits_var.set(deferred_emits)
        else:
            # called from within a listener, the outer emit delivers it
            deferred_emits.append(item)
            return

        try:
            while deferred_emits:
                yield deferred_emits.popleft()
        finally:
            self._deferred_emits_var.reset(token)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.name}>"


class RootEmitter(Emitter):
    def __init__(self):
        super().__init__("root")


root = RootEmitter()
Emitter.root = root
Emitter.registry = Registry(root)


def get_emitter(name: str = "") -> Emitter:
    if name in ("", root.name):
        return root
    return Emitter.registry.get_emitter(name)
