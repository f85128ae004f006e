void free_list(struct node *head)
{
    struct node *p, *q;
    for (p = head; p; p = q) { q = p->next; free(p); }
}
