// Hash router and session bootstrap. Routes:
//   #/            author workspace (or admin panel for admin-only users)
//   #/task/<id>   task form (QA review when the caller holds the qa role)
//   #/admin       admin panel

import { Api, ApiError } from './api.js';
import { adminPanel, authorWorkspace, el, qaReview, taskForm } from './views.js';

export function loginView(api: Api, onLogin: () => void): HTMLElement {
  const username = el('input', { type: 'text', name: 'username' });
  const password = el('input', { type: 'password', name: 'password' });
  const message = el('p', { class: 'login-message' });
  const form = el(
    'form',
    { class: 'login-form' },
    el('p', {}, 'User: ', username),
    el('p', {}, 'Password: ', password),
    el('button', { type: 'submit' }, 'Log in'),
    message,
  );
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    try {
      await api.login(username.value, password.value);
      onLogin();
    } catch (error) {
      message.textContent = error instanceof ApiError ? error.message : String(error);
    }
  });
  return form;
}

export async function route(api: Api, hash: string): Promise<HTMLElement> {
  const roles = api.session?.roles ?? [];
  const task = hash.match(/^#\/task\/(.+)$/);
  if (task) {
    return roles.includes('qa') ? qaReview(api, task[1]) : taskForm(api, task[1]);
  }
  if (hash === '#/admin' || (roles.length === 1 && roles[0] === 'admin')) {
    return adminPanel(api);
  }
  return authorWorkspace(api);
}

export function start(root: HTMLElement, api = new Api()): void {
  const render = async () => {
    if (!api.session) {
      root.replaceChildren(loginView(api, render));
      return;
    }
    try {
      root.replaceChildren(await route(api, location.hash));
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        api.session = null;
        root.replaceChildren(loginView(api, render));
        return;
      }
      root.replaceChildren(el('p', { class: 'error' }, String(error)));
    }
  };
  window.addEventListener('hashchange', () => void render());
  void render();
}
