from enum import Enum
from collections import OrderedDict
import multiprocessing
import threading
import time
import datetime
import queue
import logging

import dill
import psutil

_logger = logging.getLogger("strukt")

# Seconds between liveness polls of a running work unit
POLL_INTERVAL = 0.05

def _run_target(q, payload):
	'''
	Entry point of a worker. The callable and its arguments travel as one dill payload,
	so lambdas and closures survive every multiprocessing start method.
	'''
	func, args, kwargs = dill.loads(payload)
	try:
		r = (True, func(*args, **kwargs))
	except Exception as e:
		r = (False, e)
	try:
		q.put(dill.dumps(r))
	except Exception as e:
		q.put(dill.dumps((False, RuntimeError(f"Cannot serialize result: {e!r}"))))

class ProcessWrapState(Enum):
	RUNNING = 0
	COMPLETE = 1
	ERROR = 2
	PICKLING_ERROR = 3
	PENDING = 4

class ProcessWrap():
	def __init__(self, func, args=[], kwargs={}, callback=None, pid=None, use_thread=False):
		#call back will send the following: callback(self)
		self.func = func
		self.args = args
		self.kwargs = kwargs
		self.callback = callback
		self.state = ProcessWrapState.PENDING
		self.pid = pid
		self.use_thread = use_thread
		self.plock = threading.Condition()
		self.r = None
		self.begin_time = None
		self.end_time = None

	def start(self):
		threading.Thread(target=self._start_process, daemon=True).start()

	def kill(self):
		with self.plock:
			if self.state == ProcessWrapState.RUNNING and not self.use_thread:
				self.p.kill()

	def _start_process(self):
		with self.plock:
			self.begin_time = datetime.datetime.now()
			payload = dill.dumps((self.func, self.args, self.kwargs))
			if self.use_thread:
				q = queue.Queue()
				p = threading.Thread(target=_run_target, args=[q, payload], daemon=True)
			else:
				q = multiprocessing.Queue()
				p = multiprocessing.Process(target=_run_target, args=[q, payload])
			self.p = p
			self.q = q
			p.start()
			self.state = ProcessWrapState.RUNNING
		self._completion_check()

	def _completion_check(self):
		while self.p.is_alive() and self.q.empty():
			time.sleep(POLL_INTERVAL)
		with self.plock:
			try:
				# The child flushes its queue before exiting; allow the feeder a moment
				raw = self.q.get(timeout=1)
			except queue.Empty:
				raw = None
			self.p.join()
			if raw is not None:
				ok, value = dill.loads(raw)
				self.r = value
				self.state = ProcessWrapState.COMPLETE if ok else ProcessWrapState.ERROR
			elif self.use_thread or self.p.exitcode != 0:
				self.r = RuntimeError(f"Worker {self.pid} terminated without a result")
				self.state = ProcessWrapState.ERROR
			else:
				self.r = RuntimeError(f"Worker {self.pid} produced no readable result")
				self.state = ProcessWrapState.PICKLING_ERROR
			self.end_time = datetime.datetime.now()
			if not self.use_thread:
				self.p.close()
				self.q.close()
		if self.callback is not None:
			self.callback(self)

class ProcessWrapPool():
	'''
	Runs callables in fresh processes (or threads), at most nthread at a time.
	Process is not recycled; the pool suits a handful of long search shards.
	'''
	def __init__(self, nthread, use_thread=False):
		if nthread is None or nthread <= 0:
			nthread = default_worker_count()
		self.nthread = nthread
		self.use_thread = use_thread
		self.lock = threading.Condition()
		self.pending = OrderedDict()
		self.running = OrderedDict()
		self.finished = OrderedDict()
		self.next_pid = 0
		self.closing = False

	def run(self, func, args=[], kwargs={}):
		with self.lock:
			if self.closing:
				raise ValueError("Invalid state")
			pid = self.next_pid
			self.next_pid += 1
			self.pending[pid] = ProcessWrap(func, args, kwargs, self._on_complete, pid, self.use_thread)
			self._submit()
		return pid

	def _submit(self):
		# Caller holds self.lock
		while len(self.pending) > 0 and len(self.running) < self.nthread:
			pid, pw = self.pending.popitem(last=False)
			self.running[pid] = pw
			_logger.debug("Starting work unit %d", pid)
			pw.start()

	def _on_complete(self, pw):
		with self.lock:
			self.running.pop(pw.pid, None)
			self.finished[pw.pid] = pw
			_logger.debug("Work unit %d finished with state %s", pw.pid, pw.state.name)
			self._submit()
			self.lock.notify_all()

	def get(self, wait=False):
		'''
		Returns an OrderedDict pid -> ProcessWrap of the finished work units, removing them from the pool.
		With wait, blocks until nothing is pending or running.
		'''
		with self.lock:
			if wait:
				while len(self.pending) > 0 or len(self.running) > 0:
					self.lock.wait()
			results = OrderedDict(sorted(self.finished.items()))
			self.finished.clear()
		return results

	def close(self):
		with self.lock:
			self.closing = True
			for pw in self.pending.values():
				pw.state = ProcessWrapState.ERROR
			self.pending.clear()
			for pw in list(self.running.values()):
				pw.kill()

	def __enter__(self):
		return self

	def __exit__(self, type, value, traceback):
		self.close()

def default_worker_count():
	n = psutil.cpu_count(logical=True)
	return n if n else 1

def map_shards(func, shards, nthread=None, use_thread=False):
	'''
	Runs func(shard) for every shard and returns the results in shard order.
	The first failed shard (in shard order) re-raises its exception here.
	'''
	shards = list(shards)
	if len(shards) == 0:
		return []
	with ProcessWrapPool(nthread, use_thread=use_thread) as pool:
		pids = [pool.run(func, args=[shard]) for shard in shards]
		finished = pool.get(wait=True)
	results = []
	for pid in pids:
		pw = finished[pid]
		if pw.state != ProcessWrapState.COMPLETE:
			raise pw.r
		results.append(pw.r)
	return results
