import { afterEach, describe, expect, it } from 'vitest';

import { Api } from '../src/api.js';
import { renderGraph } from '../src/graph.js';
import { authorWorkspace, qaReview, renderViolations, taskForm, adminPanel } from '../src/views.js';
import { loginView, route, start } from '../src/app.js';
import {
  FixtureMap,
  Recorded,
  graphFixture,
  jsonResponse,
  makeFetch,
  reviewTask,
  session,
  submitTask,
  unsoundDeployError,
} from './fixtures.js';

// Every request issued anywhere in this suite lands here; the contract
// test at the bottom checks the lot against the documented endpoints.
const allRequests: Recorded[] = [];

function makeApi(fixtures: FixtureMap) {
  const log: Recorded[] = [];
  const { fetchImpl } = makeFetch(fixtures, log);
  const api = new Api('', async (url, init) => {
    const response = await fetchImpl(url, init);
    allRequests.push(log[log.length - 1]);
    return response;
  });
  return { api, log };
}

async function loggedIn(fixtures: FixtureMap, roles = ['author']) {
  const { api, log } = makeApi({ 'POST /auth/login': { ...session, roles }, ...fixtures });
  await api.login('alice', 'pw-alice');
  return { api, log };
}

function setFile(input: HTMLInputElement, file: File): void {
  Object.defineProperty(input, 'files', { value: [file], configurable: true });
  input.dispatchEvent(new Event('change'));
}

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

afterEach(() => {
  location.hash = '';
});

describe('author workspace', () => {
  it('renders a link per open task', async () => {
    const { api } = await loggedIn({
      'GET /api/tasks': { tasks: [submitTask, reviewTask] },
      'GET /api/definitions/latest': { definitions: [] },
      'POST /repo/search': { rows: [], complete: true },
    });
    const view = await authorWorkspace(api);
    const links = view.querySelectorAll('a.task-link');
    expect(links.length).toBe(2);
    expect(links[0].getAttribute('href')).toBe('#/task/task-1');
    expect(links[0].textContent).toContain('submit_article');
    expect(view.querySelector('li.empty')).toBeNull();
    expect(view.querySelector('p.empty-notice')?.textContent).toBe('no submissions yet');
  });

  it('shows placeholders when there is nothing to do', async () => {
    const { api } = await loggedIn({
      'GET /api/tasks': { tasks: [] },
      'GET /api/definitions/latest': { definitions: [] },
      'POST /repo/search': { rows: [], complete: true },
    });
    const view = await authorWorkspace(api);
    expect(view.querySelector('li.empty')?.textContent).toBe('no open tasks');
    expect(view.querySelectorAll('tr.article-row').length).toBe(0);
  });

  it('lists the caller article search results', async () => {
    const { api, log } = await loggedIn({
      'GET /api/tasks': { tasks: [] },
      'GET /api/definitions/latest': { definitions: [] },
      'POST /repo/search': {
        rows: [
          { pid: 'escipub:1', label: 'one', title: ['Alpha'], date: ['2026-01-02'] },
          { pid: 'escipub:2', label: 'two', title: ['Beta', 'B2'], date: [] },
        ],
        complete: true,
      },
    });
    const view = await authorWorkspace(api);
    const rows = view.querySelectorAll('tr.article-row');
    expect(rows.length).toBe(2);
    expect(rows[0].textContent).toContain('escipub:1');
    expect(rows[1].textContent).toContain('Beta; B2');
    const search = log.find((r) => r.path === '/repo/search');
    expect(JSON.parse(search!.body!).conditions).toEqual([['creator', 'eq', 'alice']]);
  });

  it('starts a process and jumps to the fresh task', async () => {
    const { api } = await loggedIn({
      'GET /api/tasks': { tasks: [] },
      'GET /api/definitions/latest': {
        definitions: [{ definitionId: 'def-1', name: 'publication', version: 3 }],
      },
      'POST /repo/search': { rows: [], complete: true },
      'POST /api/processes/def-1/start': { instanceId: 'inst-9', task: submitTask },
    });
    const view = await authorWorkspace(api);
    const button = view.querySelector('button.start-button') as HTMLButtonElement;
    expect(button.textContent).toBe('Start publication v3');
    button.click();
    await flush();
    expect(location.hash).toBe('#/task/task-1');
  });
});

describe('task form', () => {
  const fixtures = {
    'GET /api/tasks': { tasks: [submitTask] },
    'GET /api/instances/inst-1/graph': graphFixture,
    'POST /staging': {
      name: 'abc.pdf',
      url: '/staging/abc.pdf',
      size: 1234,
      mimeType: 'application/pdf',
    },
  };

  it('reports detected size and mime type after an upload', async () => {
    const { api } = await loggedIn(fixtures);
    const view = await taskForm(api, 'task-1');
    const fileInput = view.querySelector('input[type=file]') as HTMLInputElement;
    setFile(fileInput, new File([new Uint8Array(1234)], 'abc.pdf'));
    await flush();
    expect(view.querySelector('span.upload-info')?.textContent).toBe('application/pdf, 1234 bytes');
  });

  it('shows the PID read-only and keeps text input edits', async () => {
    const { api } = await loggedIn(fixtures);
    const view = await taskForm(api, 'task-1');
    const pidField = view.querySelector('input.pid-field') as HTMLInputElement;
    expect(pidField.getAttribute('value')).toBe('escipub:1');
    expect(pidField.hasAttribute('readonly')).toBe(true);
    const title = view.querySelector('input[name=title]') as HTMLInputElement;
    title.value = 'Deep Currents';
    expect(title.value).toBe('Deep Currents');
  });

  it('saves the staged article before completing the task', async () => {
    const { api, log } = await loggedIn({
      ...fixtures,
      'GET /repo/objects/escipub:1/datastreams/ARTICLE': () =>
        jsonResponse({ code: 'UNKNOWN_DATASTREAM', message: 'no ARTICLE' }, 404),
      'POST /repo/objects/escipub:1/datastreams/ARTICLE': { versionNo: 1 },
      'POST /api/tasks/task-1/complete': {
        instanceId: 'inst-1',
        state: 'running',
        currentNodes: ['review'],
        variables: {},
      },
    });
    const view = await taskForm(api, 'task-1');
    setFile(
      view.querySelector('input[type=file]') as HTMLInputElement,
      new File([new Uint8Array(9)], 'abc.pdf'),
    );
    await flush();
    (view.querySelector('input[name=title]') as HTMLInputElement).value = 'Deep Currents';
    view.querySelector('form.task-form')!.dispatchEvent(new Event('submit', { cancelable: true }));
    await flush();

    const add = log.find((r) => r.method === 'POST' && r.path.endsWith('/datastreams/ARTICLE'));
    expect(add).toBeDefined();
    expect(JSON.parse(add!.body!)).toMatchObject({
      mode: 'byReference',
      location: '/staging/abc.pdf',
      mimeType: 'application/pdf',
      formatURI: 'alice',
    });
    const complete = log.find((r) => r.path === '/api/tasks/task-1/complete');
    const payload = JSON.parse(complete!.body!);
    expect(payload.transition).toBe('to_qa');
    expect(payload.variables.title).toEqual({ t: 'string', v: 'Deep Currents' });
    expect(log.indexOf(add!)).toBeLessThan(log.indexOf(complete!));
    expect(location.hash).toBe('#/');
  });

  it('tells the user when the task is no longer open', async () => {
    const { api } = await loggedIn({ 'GET /api/tasks': { tasks: [] } });
    const view = await taskForm(api, 'task-1');
    expect(view.className).toBe('stale-task');
    expect(view.textContent).toContain('task no longer open');
    expect(view.querySelector('a.refresh')).not.toBeNull();
  });
});

describe('graph rendering', () => {
  it('draws every node exactly once', () => {
    const svg = renderGraph(graphFixture);
    const groups = svg.querySelectorAll('g.node');
    expect(groups.length).toBe(graphFixture.nodes.length);
    const names = [...groups].map((g) => g.getAttribute('data-node')).sort();
    expect(names).toEqual(['done', 'review', 'rework', 'submit']);
    expect(svg.querySelectorAll('line.edge').length).toBe(graphFixture.transitions.length);
  });

  it('marks current nodes and only current nodes', () => {
    const svg = renderGraph(graphFixture);
    for (const group of svg.querySelectorAll('g.node')) {
      const name = group.getAttribute('data-node')!;
      expect(group.classList.contains('current')).toBe(graphFixture.currentNodes.includes(name));
    }
    expect(svg.querySelectorAll('g.node.current').length).toBe(1);
  });

  it('labels named transitions but not the default one', () => {
    const svg = renderGraph(graphFixture);
    const labels = [...svg.querySelectorAll('text.edge-label')].map((t) => t.textContent);
    expect(labels.sort()).toEqual(['approve', 'rework', 'to_qa']);
  });
});

describe('QA review', () => {
  it('completes with the chosen transition and the comment variable', async () => {
    const { api, log } = await loggedIn(
      {
        'GET /api/tasks': { tasks: [reviewTask] },
        'POST /api/tasks/task-2/complete': {
          instanceId: 'inst-1',
          state: 'running',
          currentNodes: ['rework'],
          variables: {},
        },
      },
      ['qa'],
    );
    const view = await qaReview(api, 'task-2');
    expect(view.querySelector('a.article-download')?.getAttribute('href')).toBe(
      '/repo/objects/escipub:1/datastreams/ARTICLE',
    );
    (view.querySelector('textarea.comment-field') as HTMLTextAreaElement).value = 'needs a figure';
    (view.querySelector('button.rework-button') as HTMLButtonElement).click();
    await flush();
    const complete = log.find((r) => r.path === '/api/tasks/task-2/complete');
    expect(JSON.parse(complete!.body!)).toEqual({
      transition: 'rework',
      variables: { comment: { t: 'string', v: 'needs a figure' } },
    });
  });
});

describe('admin panel', () => {
  it('lists each soundness violation when a deploy is refused', async () => {
    const { api } = await loggedIn(
      {
        'GET /api/definitions/latest': { definitions: [] },
        'POST /api/definitions': () => jsonResponse(unsoundDeployError, 400),
      },
      ['admin'],
    );
    const view = await adminPanel(api);
    setFile(
      view.querySelector('input.archive-input') as HTMLInputElement,
      new File([new Uint8Array(4)], 'bad.zip'),
    );
    (view.querySelector('button.deploy-button') as HTMLButtonElement).click();
    await flush();
    expect(view.querySelector('p.deploy-failed')?.textContent).toContain('UNREACHABLE_NODE');
    const items = view.querySelectorAll('ul.violations li.violation');
    expect(items.length).toBe(1);
    expect(items[0].textContent).toBe(
      "UNREACHABLE_NODE (orphan): node 'orphan' is unreachable from the start node",
    );
    expect(view.querySelector('p.deploy-ok')).toBeNull();
  });

  it('confirms a successful deploy', async () => {
    const { api } = await loggedIn(
      {
        'GET /api/definitions/latest': { definitions: [] },
        'POST /api/definitions': { definitionId: 'def-2', name: 'publication', version: 2 },
      },
      ['admin'],
    );
    const view = await adminPanel(api);
    setFile(
      view.querySelector('input.archive-input') as HTMLInputElement,
      new File([new Uint8Array(4)], 'good.zip'),
    );
    (view.querySelector('button.deploy-button') as HTMLButtonElement).click();
    await flush();
    expect(view.querySelector('p.deploy-ok')?.textContent).toBe('deployed publication v2');
    expect(view.querySelector('ul.violations')).toBeNull();
  });

  it('stops an instance and shows its state chip and graph', async () => {
    const { api } = await loggedIn(
      {
        'GET /api/definitions/latest': { definitions: [] },
        'POST /api/instances/inst-1/admin': {
          instanceId: 'inst-1',
          state: 'ended',
          currentNodes: [],
          variables: {},
        },
        'GET /api/instances/inst-1/graph': graphFixture,
      },
      ['admin'],
    );
    const view = await adminPanel(api);
    (view.querySelector('input.instance-input') as HTMLInputElement).value = 'inst-1';
    (view.querySelector('button.stop-button') as HTMLButtonElement).click();
    await flush();
    const chip = view.querySelector('span.state-chip');
    expect(chip?.textContent).toBe('ended');
    expect(chip?.classList.contains('state-ended')).toBe(true);
    expect(view.querySelector('.graph-panel svg.process-graph')).not.toBeNull();
  });
});

describe('violation list', () => {
  it('renders one entry per violation', () => {
    const list = renderViolations([
      { code: 'DEAD_END', subject: 'limbo', message: 'no path to an end node' },
      { code: 'NO_START', subject: '', message: 'definition has no start node' },
    ]);
    const items = list.querySelectorAll('li.violation');
    expect(items.length).toBe(2);
    expect(items[0].textContent).toBe('DEAD_END (limbo): no path to an end node');
  });
});

describe('routing and login', () => {
  it('routes task hashes by role', async () => {
    const { api: author } = await loggedIn({
      'GET /api/tasks': { tasks: [submitTask] },
      'GET /api/instances/inst-1/graph': graphFixture,
    });
    expect((await route(author, '#/task/task-1')).className).toBe('task-view');

    const { api: reviewer } = await loggedIn({ 'GET /api/tasks': { tasks: [reviewTask] } }, ['qa']);
    expect((await route(reviewer, '#/task/task-2')).className).toBe('qa-view');
  });

  it('sends admin-only users to the admin panel', async () => {
    const { api } = await loggedIn({ 'GET /api/definitions/latest': { definitions: [] } }, [
      'admin',
    ]);
    expect((await route(api, '')).className).toBe('admin-panel');
  });

  it('shows the login form first and the workspace after login', async () => {
    const { api } = makeApi({
      'POST /auth/login': session,
      'GET /api/tasks': { tasks: [] },
      'GET /api/definitions/latest': { definitions: [] },
      'POST /repo/search': { rows: [], complete: true },
    });
    const root = document.createElement('div');
    start(root, api);
    await flush();
    const form = root.querySelector('form.login-form');
    expect(form).not.toBeNull();
    (root.querySelector('input[name=username]') as HTMLInputElement).value = 'alice';
    (root.querySelector('input[name=password]') as HTMLInputElement).value = 'pw-alice';
    form!.dispatchEvent(new Event('submit', { cancelable: true }));
    await flush();
    await flush();
    expect(root.querySelector('.author-workspace')).not.toBeNull();
  });

  it('reports bad credentials on the login form', async () => {
    const { api } = makeApi({
      'POST /auth/login': () =>
        jsonResponse({ code: 'BAD_CREDENTIALS', message: 'unknown user or wrong password' }, 401),
    });
    const root = document.createElement('div');
    root.appendChild(
      loginView(api, () => {
        throw new Error('must not log in');
      }),
    );
    root.querySelector('form.login-form')!.dispatchEvent(new Event('submit', { cancelable: true }));
    await flush();
    expect(root.querySelector('p.login-message')?.textContent).toBe(
      'unknown user or wrong password',
    );
  });
});

describe('wire contract', () => {
  const DOCUMENTED = [
    /^POST \/auth\/login$/,
    /^GET \/api\/description$/,
    /^GET \/api\/tasks$/,
    /^GET \/api\/definitions\/latest$/,
    /^POST \/api\/definitions$/,
    /^POST \/api\/processes\/[^/]+\/start$/,
    /^POST \/api\/tasks\/[^/]+\/complete$/,
    /^PUT \/api\/instances\/[^/]+\/variables\/[^/]+$/,
    /^POST \/api\/instances\/[^/]+\/admin$/,
    /^GET \/api\/instances\/[^/]+\/graph$/,
    /^POST \/staging$/,
    /^GET \/staging\/[^/]+$/,
    /^POST \/repo\/objects$/,
    /^GET \/repo\/objects\/[^/]+$/,
    /^(GET|POST|PUT) \/repo\/objects\/[^/]+\/datastreams\/[^/]+$/,
    /^POST \/repo\/search$/,
  ];

  it('only ever calls documented endpoints', () => {
    expect(allRequests.length).toBeGreaterThan(20);
    for (const { method, path } of allRequests) {
      const line = `${method} ${path}`;
      expect(
        DOCUMENTED.some((pattern) => pattern.test(line)),
        `undocumented request: ${line}`,
      ).toBe(true);
    }
  });
});
