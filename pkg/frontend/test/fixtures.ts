// A recorded fixture server: canned responses per method+path, plus a log
// of every request the UI issued so the contract test can check it.

export type Recorded = { method: string; path: string; body?: string };

export type FixtureMap = Record<string, unknown | ((init?: RequestInit) => Response)>;

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

export function makeFetch(fixtures: FixtureMap, log: Recorded[] = []) {
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? 'GET';
    const path = url.split('?')[0];
    const body = typeof init?.body === 'string' ? init.body : undefined;
    log.push({ method, path, body });
    const fixture = fixtures[`${method} ${path}`];
    if (fixture === undefined) {
      return jsonResponse({ code: 'NOT_FOUND', message: `no fixture for ${method} ${path}` }, 404);
    }
    if (typeof fixture === 'function') return (fixture as (i?: RequestInit) => Response)(init);
    return jsonResponse(fixture);
  };
  return { fetchImpl, log };
}

export const session = {
  token: 'f'.repeat(32),
  actorId: 'alice',
  roles: ['author'],
  expiresAt: 9999999999,
};

export const submitTask = {
  taskInstanceId: 'task-1',
  instanceId: 'inst-1',
  nodeName: 'submit',
  taskName: 'submit_article',
  actorId: 'alice',
  state: 'open',
  createdAt: '2026-08-23T00:00:00.000000Z',
  transitions: ['to_qa'],
  formFields: [
    { name: 'title', label: 'Title', type: 'text' },
    { name: 'upload', label: 'Article file', type: 'file' },
  ],
  variables: { pid: { t: 'string', v: 'escipub:1' } },
};

export const reviewTask = {
  ...submitTask,
  taskInstanceId: 'task-2',
  nodeName: 'review',
  taskName: 'review_article',
  transitions: ['approve', 'rework'],
  formFields: [],
};

export const graphFixture = {
  nodes: [
    { name: 'submit', kind: 'start', x: 40, y: 40, w: 120, h: 40 },
    { name: 'review', kind: 'task', x: 200, y: 40, w: 120, h: 40 },
    { name: 'rework', kind: 'task', x: 200, y: 140, w: 120, h: 40 },
    { name: 'done', kind: 'end', x: 360, y: 40, w: 120, h: 40 },
  ],
  transitions: [
    { from: 'submit', to: 'review', name: 'to_qa' },
    { from: 'review', to: 'done', name: 'approve' },
    { from: 'review', to: 'rework', name: 'rework' },
    { from: 'rework', to: 'review', name: null },
  ],
  currentNodes: ['review'],
};

export const unsoundDeployError = {
  code: 'UNSOUND_DEFINITION',
  message: 'deployment refused, definition is unsound: UNREACHABLE_NODE(orphan)',
  detail: [
    {
      code: 'UNREACHABLE_NODE',
      subject: 'orphan',
      message: "node 'orphan' is unreachable from the start node",
    },
  ],
};
