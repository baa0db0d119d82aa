// The four workspaces: author home, task form, QA review, admin panel.
// Every view is a plain render function returning a detached element;
// the router mounts it. All state comes from server responses.

import {
  Api,
  ApiError,
  StagingRef,
  Task,
  TypedValue,
  Violation,
} from './api.js';
import { renderGraph } from './graph.js';

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function renderVar(value: TypedValue | undefined): string {
  if (!value) return '';
  if (value.t === 'boolean') return value.v ? 'true' : 'false';
  return String(value.v);
}

function taskLink(task: Task): HTMLElement {
  const href = `#/task/${task.taskInstanceId}`;
  return el(
    'li',
    { class: 'task-entry' },
    el('a', { href, class: 'task-link' }, `${task.taskName} (${task.nodeName})`),
  );
}

// -- author workspace ---------------------------------------------------------

export async function authorWorkspace(api: Api): Promise<HTMLElement> {
  const user = api.session!.actorId;
  const [tasks, definitions, articles] = await Promise.all([
    api.listTasks(),
    api.latestDefinitions(),
    api.search([['creator', 'eq', user]]),
  ]);

  const taskList = el('ul', { class: 'task-list' });
  for (const task of tasks.tasks) taskList.appendChild(taskLink(task));
  if (tasks.tasks.length === 0) taskList.appendChild(el('li', { class: 'empty' }, 'no open tasks'));

  const startArea = el('div', { class: 'definitions' });
  for (const definition of definitions.definitions) {
    const button = el('button', { class: 'start-button' }, `Start ${definition.name} v${definition.version}`);
    button.addEventListener('click', async () => {
      const started = await api.startProcess(definition.definitionId);
      location.hash = `#/task/${started.task.taskInstanceId}`;
    });
    startArea.appendChild(button);
  }

  const table = el('table', { class: 'articles' });
  table.appendChild(
    el('tr', {}, el('th', {}, 'PID'), el('th', {}, 'Title'), el('th', {}, 'Date')),
  );
  for (const row of articles.rows) {
    table.appendChild(
      el(
        'tr',
        { class: 'article-row' },
        el('td', {}, row.pid),
        el('td', {}, ((row.title as string[]) ?? []).join('; ')),
        el('td', {}, ((row.date as string[]) ?? []).join('; ')),
      ),
    );
  }
  const articleArea = el('div', { class: 'article-area' }, table);
  if (articles.rows.length === 0) {
    articleArea.appendChild(el('p', { class: 'empty-notice' }, 'no submissions yet'));
  }

  return el(
    'div',
    { class: 'workspace author-workspace' },
    el('h2', {}, `Tasks for ${user}`),
    taskList,
    el('h2', {}, 'Start new publication process'),
    startArea,
    el('h2', {}, 'My articles'),
    articleArea,
  );
}

// -- task form -----------------------------------------------------------------

export async function taskForm(api: Api, taskId: string): Promise<HTMLElement> {
  const tasks = (await api.listTasks()).tasks;
  const task = tasks.find((t) => t.taskInstanceId === taskId);
  if (!task) {
    const refresh = el('a', { href: '#/', class: 'refresh' }, 'back to workspace');
    return el('div', { class: 'stale-task' }, el('p', {}, 'task no longer open'), refresh);
  }

  const form = el('form', { class: 'task-form' });
  const inputs = new Map<string, HTMLInputElement>();
  let staged: StagingRef | null = null;
  const uploadInfo = el('span', { class: 'upload-info' });

  const pid = renderVar(task.variables['pid']);
  form.appendChild(
    el(
      'p',
      { class: 'pid-row' },
      'PID: ',
      el('input', { class: 'pid-field', value: pid, readonly: '', disabled: '' }),
    ),
  );

  for (const field of task.formFields) {
    const row = el('p', { class: 'field-row' }, el('label', {}, field.label + ' '));
    if (field.type === 'file') {
      const input = el('input', { type: 'file', name: field.name });
      input.addEventListener('change', async () => {
        const file = input.files?.[0];
        if (!file) return;
        staged = await api.uploadStaging(file);
        uploadInfo.textContent = `${staged.mimeType}, ${staged.size} bytes`;
      });
      row.appendChild(input);
      row.appendChild(uploadInfo);
    } else {
      const input = el('input', {
        type: 'text',
        name: field.name,
        value: renderVar(task.variables[field.name]),
      });
      inputs.set(field.name, input);
      row.appendChild(input);
    }
    form.appendChild(row);
  }

  const transitionSelect = el('select', { class: 'transition-select' });
  for (const name of task.transitions) {
    transitionSelect.appendChild(el('option', { value: name ?? '' }, name ?? '(default)'));
  }
  form.appendChild(el('p', {}, 'Transition: ', transitionSelect));

  const save = el('button', { type: 'submit', class: 'save-button' }, 'Save task and quit');
  form.appendChild(save);
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const variables: Record<string, TypedValue> = {};
    for (const [name, input] of inputs) {
      variables[name] = { t: 'string', v: input.value };
    }
    if (staged && pid) {
      await api.saveArticle(pid, staged, api.session!.actorId);
    }
    const chosen = (transitionSelect as HTMLSelectElement).value || null;
    await api.completeTask(task.taskInstanceId, chosen, variables);
    location.hash = '#/';
  });

  const graph = renderGraph(await api.instanceGraph(task.instanceId));
  return el(
    'div',
    { class: 'task-view' },
    el('h2', {}, task.taskName),
    form,
    el('div', { class: 'graph-panel' }, graph),
  );
}

// -- QA review -------------------------------------------------------------------

export async function qaReview(api: Api, taskId: string): Promise<HTMLElement> {
  const tasks = (await api.listTasks()).tasks;
  const task = tasks.find((t) => t.taskInstanceId === taskId);
  if (!task) {
    return el('div', { class: 'stale-task' }, el('p', {}, 'task no longer open'));
  }

  const pid = renderVar(task.variables['pid']);
  const meta = el('dl', { class: 'metadata' });
  for (const [name, value] of Object.entries(task.variables)) {
    meta.appendChild(el('dt', {}, name));
    meta.appendChild(el('dd', {}, renderVar(value)));
  }

  const comment = el('textarea', { class: 'comment-field' });
  const decide = async (transition: string) => {
    const variables: Record<string, TypedValue> = {};
    if (comment.value) variables['comment'] = { t: 'string', v: comment.value };
    await api.completeTask(task.taskInstanceId, transition, variables);
    location.hash = '#/';
  };
  const approve = el('button', { class: 'approve-button' }, 'Approve');
  approve.addEventListener('click', () => void decide('approve'));
  const rework = el('button', { class: 'rework-button' }, 'Rework');
  rework.addEventListener('click', () => void decide('rework'));

  const download = pid
    ? el('a', { href: api.datastreamUrl(pid, 'ARTICLE'), class: 'article-download' }, 'download article')
    : el('span', {}, 'no article attached');

  return el(
    'div',
    { class: 'qa-view' },
    el('h2', {}, task.taskName),
    meta,
    el('p', {}, download),
    el('p', {}, 'Comment: ', comment),
    el('p', {}, approve, ' ', rework),
  );
}

// -- admin panel -------------------------------------------------------------------

export function renderViolations(detail: Violation[]): HTMLElement {
  const list = el('ul', { class: 'violations' });
  for (const violation of detail) {
    list.appendChild(
      el('li', { class: 'violation' }, `${violation.code} (${violation.subject}): ${violation.message}`),
    );
  }
  return list;
}

export async function adminPanel(api: Api): Promise<HTMLElement> {
  const deployResult = el('div', { class: 'deploy-result' });
  const archiveInput = el('input', { type: 'file', class: 'archive-input' });
  const deployButton = el('button', { class: 'deploy-button' }, 'Deploy archive');
  deployButton.addEventListener('click', async () => {
    const file = archiveInput.files?.[0];
    if (!file) return;
    deployResult.replaceChildren();
    try {
      const deployed = await api.deployArchive(file);
      deployResult.appendChild(
        el('p', { class: 'deploy-ok' }, `deployed ${deployed.name} v${deployed.version}`),
      );
    } catch (error) {
      if (error instanceof ApiError && Array.isArray(error.detail)) {
        deployResult.appendChild(el('p', { class: 'deploy-failed' }, error.message));
        deployResult.appendChild(renderViolations(error.detail as Violation[]));
      } else {
        throw error;
      }
    }
  });

  const instanceInput = el('input', { type: 'text', class: 'instance-input', placeholder: 'inst-1' });
  const instanceState = el('div', { class: 'instance-state' });
  const graphHost = el('div', { class: 'graph-panel' });
  const act = async (action: 'advance' | 'stop' | 'show') => {
    const id = instanceInput.value.trim();
    if (!id) return;
    if (action !== 'show') {
      const instance = await api.administer(id, action);
      instanceState.replaceChildren(
        el('span', { class: `state-chip state-${instance.state}` }, instance.state),
      );
    }
    graphHost.replaceChildren(renderGraph(await api.instanceGraph(id)));
  };
  const advance = el('button', { class: 'advance-button' }, 'Advance');
  advance.addEventListener('click', () => void act('advance'));
  const stop = el('button', { class: 'stop-button' }, 'Stop');
  stop.addEventListener('click', () => void act('stop'));
  const show = el('button', { class: 'show-button' }, 'Show graph');
  show.addEventListener('click', () => void act('show'));

  const definitions = (await api.latestDefinitions()).definitions;
  const table = el('table', { class: 'definition-table' });
  table.appendChild(el('tr', {}, el('th', {}, 'Name'), el('th', {}, 'Version')));
  for (const definition of definitions) {
    table.appendChild(
      el('tr', { class: 'definition-row' },
        el('td', {}, definition.name),
        el('td', {}, String(definition.version))),
    );
  }

  return el(
    'div',
    { class: 'admin-panel' },
    el('h2', {}, 'Deploy process archive'),
    el('p', {}, archiveInput, ' ', deployButton),
    deployResult,
    el('h2', {}, 'Deployed definitions'),
    table,
    el('h2', {}, 'Instance administration'),
    el('p', {}, instanceInput, ' ', advance, ' ', stop, ' ', show, ' ', instanceState),
    graphHost,
  );
}
