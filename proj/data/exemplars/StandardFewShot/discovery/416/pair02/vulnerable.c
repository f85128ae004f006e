void free_list(struct node *head)
{
    struct node *p, *q;
    for (p = head; p; p = p->next) free(p);
}
